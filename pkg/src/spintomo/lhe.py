"""Streaming parser and writer for LHE-lite event files.

An LHE-lite file is an XML-like container of <event> blocks.  Each block
starts with a header line (first token = particle count) followed by one
whitespace-separated row per particle:

    id status mother1 mother2 color1 color2 px py pz E m lifetime spin

Parsing is streaming with constant memory per event.  Malformed blocks
raise LheParseError with the offending line number in strict mode, or
are reported and skipped otherwise.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

log = logging.getLogger(__name__)


class LheParseError(ValueError):
    def __init__(self, message, line_number):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


@dataclass
class LheParticle:
    pdg: int
    status: int
    mother1: int
    mother2: int
    color1: int
    color2: int
    px: float
    py: float
    pz: float
    E: float
    mass: float
    lifetime: float
    spin: float

    @property
    def p4(self):
        return np.array([self.E, self.px, self.py, self.pz])


@dataclass
class LheLiteEvent:
    particles: list
    line_number: int  # line of the <event> tag

    def final_state(self):
        return [p for p in self.particles if p.status == 1]

    def daughters_of(self, index):
        """Final-state particles whose mother1 points at 1-based index."""
        return [p for p in self.particles if p.status == 1 and p.mother1 == index]


def _parse_particle(line, line_number):
    tokens = line.split()
    if len(tokens) != 13:
        raise LheParseError(f"expected 13 particle fields, got {len(tokens)}",
                            line_number)
    try:
        ints = [int(float(t)) for t in tokens[:6]]
        floats = [float(t) for t in tokens[6:]]
    except ValueError as exc:
        raise LheParseError(f"unparseable particle row ({exc})", line_number)
    return LheParticle(*ints, *floats)


def parse_lhe_lite(path, strict=True):
    """Yield LheLiteEvent records from an LHE-lite file.

    strict=True raises LheParseError on the first malformed block;
    otherwise malformed blocks are logged with their line numbers and
    skipped.
    """
    def fail(err):
        if strict:
            raise err
        log.warning("skipping malformed event: %s", err)

    with open(path) as fh:
        in_event = bad = False
        header = None
        particles = []
        event_line = line_number = 0
        for line_number, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("<!--"):
                continue
            if line.startswith("<event"):
                if in_event:
                    fail(LheParseError("nested <event> block", line_number))
                in_event, bad, header, particles = True, False, None, []
                event_line = line_number
                continue
            if line.startswith("</event>"):
                if not in_event:
                    fail(LheParseError("</event> outside an event block",
                                       line_number))
                    continue
                in_event = False
                if header is None:
                    fail(LheParseError("event block has no header", line_number))
                elif not bad and len(particles) != header:
                    fail(LheParseError(
                        f"event header announced {header} particles, "
                        f"found {len(particles)}", line_number))
                elif not bad:
                    yield LheLiteEvent(particles=particles, line_number=event_line)
                continue
            if not in_event:
                continue  # container tags and init block contents
            if header is None:
                try:
                    header = int(float(line.split()[0]))
                except (ValueError, IndexError):
                    fail(LheParseError("unparseable event header", line_number))
                    bad, header = True, -1
                continue
            try:
                particles.append(_parse_particle(line, line_number))
            except LheParseError as err:
                fail(err)
                bad = True
        if in_event:
            fail(LheParseError("file ends inside an <event> block", line_number))


def write_lhe_lite(path, events):
    """Write LheLiteEvent records; the inverse of parse_lhe_lite."""
    with open(path, "w") as fh:
        fh.write("<LesHouchesEvents version=\"lite\">\n")
        for ev in events:
            fh.write("<event>\n")
            fh.write(f"{len(ev.particles)} 0 1.0 0.0 0.0 0.0\n")
            for p in ev.particles:
                fields = " ".join(repr(float(x))
                                  for x in (p.px, p.py, p.pz, p.E, p.mass))
                fh.write(f"{p.pdg} {p.status} {p.mother1} {p.mother2} "
                         f"{p.color1} {p.color2} {fields} "
                         f"{p.lifetime:g} {p.spin:g}\n")
            fh.write("</event>\n")
        fh.write("</LesHouchesEvents>\n")
