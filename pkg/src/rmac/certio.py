"""Certificate text format, verification, and corpus regeneration.

A certificate records a family together with the claims it witnesses, in a
line-oriented, human-diffable text format (UTF-8, LF, space-separated):

    # free-text comment lines (before a block)
    instance n=<int> r=<int>
    meta provenance=<tag> [version=<str>]
    levels <t1> <t2> ...
    set <e1> <e2> ...
    end

One `set` line per member, one-based elements in strictly increasing
order; multiple blocks may share a file.  Parsing is strict and never
recovers, so a certificate that parses is unambiguous evidence, and
verification trusts nothing but the family itself.
"""
from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .bounds import (DomainError, Inapplicable, Relaxed, Strict,
                     construction_applicability, g_upper_bound)
from .construct import build_construction
from .family import Family, is_antichain
from .search import (Feasible, ProfileInstance, SearchBudget, SearchConfig,
                     Unknown, feasible_exact_profile)

PROVENANCE_TAGS = ("constructed-strict", "constructed-relaxed", "search", "external")


class ParseError(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


class HeaderMismatch(ParseError):
    """The body contradicts the header claims."""


class IoFailure(OSError):
    pass


@dataclass(frozen=True)
class Certificate:
    """Header claims (n, r, levels, provenance) plus the family body."""

    n: int
    r: int
    levels: tuple[int, ...]
    family: Family
    provenance: str = "external"
    version: str = ""
    comments: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.n != self.family.n:
            raise ValueError("header n differs from the family ground size")
        if self.r < 1:
            raise ValueError("multiplicity must be >= 1")
        if self.provenance not in PROVENANCE_TAGS:
            raise ValueError(f"provenance must be one of {PROVENANCE_TAGS}")
        occ = tuple(sorted(self.family.profile.occurring))
        if tuple(self.levels) != occ:
            raise ValueError(f"claimed levels {self.levels} differ from occurring {occ}")


def certificate_for(family: Family, r: int, provenance: str,
                    version: str = "", comments: Sequence[str] = ()) -> Certificate:
    """Build a certificate whose level claim is derived from the family."""
    return Certificate(family.n, r, tuple(sorted(family.profile.occurring)),
                       family, provenance, version, tuple(comments))


def format_certificate(cert: Certificate) -> str:
    lines = [f"# {c}" if c else "#" for c in cert.comments]
    lines.append(f"instance n={cert.n} r={cert.r}")
    meta = f"meta provenance={cert.provenance}"
    if cert.version:
        meta += f" version={cert.version}"
    lines.append(meta)
    lines.append("levels" + "".join(f" {t}" for t in cert.levels))
    for s in cert.family.sets():
        lines.append("set" + "".join(f" {e}" for e in s))
    lines.append("end")
    return "\n".join(lines) + "\n"


def format_certificates(certs: Iterable[Certificate]) -> str:
    return "\n".join(format_certificate(c) for c in certs)


def write_certificate(cert: Certificate, destination) -> int:
    """Write one certificate; returns bytes written."""
    data = format_certificate(cert).encode("utf-8")
    try:
        Path(destination).write_bytes(data)
    except OSError as exc:
        raise IoFailure(f"cannot write {destination}: {exc}") from exc
    return len(data)


def write_certificates(certs: Sequence[Certificate], destination) -> int:
    data = format_certificates(certs).encode("utf-8")
    try:
        Path(destination).write_bytes(data)
    except OSError as exc:
        raise IoFailure(f"cannot write {destination}: {exc}") from exc
    return len(data)


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line_no, f"{what} must be an integer, got {token!r}") from None


def parse_certificates(text: str) -> list[Certificate]:
    certs: list[Certificate] = []
    comments: list[str] = []
    block: dict | None = None
    last_line = 0
    for line_no, raw in enumerate(text.splitlines(), start=1):
        last_line = line_no
        line = raw.rstrip()
        if not line:
            if block is not None:
                raise ParseError(line_no, "blank line inside a block")
            continue
        if line.startswith("#"):
            if block is not None:
                raise ParseError(line_no, "comment inside a block")
            comments.append(line[2:] if line.startswith("# ") else line[1:])
            continue
        tokens = line.split()
        keyword = tokens[0]
        if block is None:
            if keyword != "instance":
                raise ParseError(line_no, f"expected 'instance', got {keyword!r}")
            if len(tokens) != 3 or not tokens[1].startswith("n=") \
                    or not tokens[2].startswith("r="):
                raise ParseError(line_no, "instance line must be 'instance n=<int> r=<int>'")
            n = _parse_int(tokens[1][2:], line_no, "n")
            r = _parse_int(tokens[2][2:], line_no, "r")
            if not 1 <= n <= 64:
                raise ParseError(line_no, f"n must be in 1..64, got {n}")
            if r < 1:
                raise ParseError(line_no, f"r must be >= 1, got {r}")
            block = {"n": n, "r": r, "levels": None, "masks": [],
                     "provenance": "external", "version": "",
                     "comments": tuple(comments), "start": line_no}
            comments = []
        elif keyword == "meta":
            if block["levels"] is not None or block["masks"]:
                raise ParseError(line_no, "meta must come directly after instance")
            for tok in tokens[1:]:
                if tok.startswith("provenance="):
                    tag = tok[len("provenance="):]
                    if tag not in PROVENANCE_TAGS:
                        raise ParseError(line_no, f"unknown provenance {tag!r}")
                    block["provenance"] = tag
                elif tok.startswith("version="):
                    block["version"] = tok[len("version="):]
                else:
                    raise ParseError(line_no, f"unknown meta field {tok!r}")
        elif keyword == "levels":
            if block["levels"] is not None:
                raise ParseError(line_no, "duplicate levels line")
            lv = [_parse_int(t, line_no, "level") for t in tokens[1:]]
            for a, b in zip(lv, lv[1:]):
                if a >= b:
                    raise ParseError(line_no, "levels must be strictly increasing")
            if any(t < 0 or t > block["n"] for t in lv):
                raise HeaderMismatch(line_no, "level outside 0..n")
            block["levels"] = tuple(lv)
        elif keyword == "set":
            if block["levels"] is None:
                raise ParseError(line_no, "set line before levels line")
            elems = [_parse_int(t, line_no, "element") for t in tokens[1:]]
            for a, b in zip(elems, elems[1:]):
                if a >= b:
                    raise ParseError(line_no, "elements must be strictly increasing")
            if any(e < 1 for e in elems):
                raise ParseError(line_no, "elements are one-based")
            if any(e > block["n"] for e in elems):
                raise HeaderMismatch(line_no, f"element exceeds n={block['n']}")
            mask = 0
            for e in elems:
                mask |= 1 << (e - 1)
            block["masks"].append(mask)
        elif keyword == "end":
            if block["levels"] is None:
                raise ParseError(line_no, "block ends without a levels line")
            try:
                fam = Family.from_masks(block["n"], block["masks"])
            except ValueError as exc:
                raise ParseError(line_no, f"invalid family body: {exc}") from None
            occ = tuple(sorted(fam.profile.occurring))
            if occ != block["levels"]:
                raise HeaderMismatch(
                    line_no, f"levels line {block['levels']} but body occurs on {occ}")
            certs.append(Certificate(block["n"], block["r"], occ, fam,
                                     block["provenance"], block["version"],
                                     block["comments"]))
            block = None
        else:
            raise ParseError(line_no, f"unknown directive {keyword!r}")
    if block is not None:
        raise ParseError(last_line, "unterminated block (missing 'end')")
    if comments:
        raise ParseError(last_line, "dangling comments after the final block")
    return certs


def read_certificates(source) -> list[Certificate]:
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoFailure(f"cannot read {source}: {exc}") from exc
    return parse_certificates(text)


def read_certificate(source) -> Certificate:
    certs = read_certificates(source)
    if len(certs) != 1:
        raise ParseError(0, f"expected exactly one certificate, found {len(certs)}")
    return certs[0]


@dataclass(frozen=True)
class VerificationReport:
    antichain: bool
    multiplicity_ok: bool
    levels: dict[int, int]
    num_levels: int
    matches_claim: bool
    g_bound_consistent: bool

    def to_dict(self) -> dict:
        return {
            "antichain": self.antichain,
            "multiplicity_ok": self.multiplicity_ok,
            "levels": {str(t): c for t, c in sorted(self.levels.items())},
            "num_levels": self.num_levels,
            "matches_claim": self.matches_claim,
            "g_bound_consistent": self.g_bound_consistent,
        }


def verify_certificate(cert: Certificate) -> VerificationReport:
    """Re-check every claim from the family alone, ignoring provenance."""
    fam = cert.family
    prof = fam.profile
    anti = is_antichain(fam)
    mult = all(c >= cert.r for c in prof.counts.values())
    num = len(prof.occurring)
    matches = anti and mult and prof.occurring == frozenset(cert.levels)
    if cert.n >= 4 and cert.r >= 2:
        consistent = num <= g_upper_bound(cert.n, cert.r)
    else:
        consistent = True
    return VerificationReport(anti, mult, dict(prof.counts), num, matches, consistent)


# -- corpus regeneration -----------------------------------------------------

def _solve_instance(n: int, r: int, budget: SearchBudget | None,
                    config: SearchConfig | None, version: str):
    """One corpus instance: construct when possible, else search {2..n-2}."""
    try:
        app = construction_applicability(n, r)
    except DomainError:
        app = Inapplicable("outside the construction formula domain")
    t0 = time.perf_counter()
    if isinstance(app, (Strict, Relaxed)):
        tag = "constructed-strict" if isinstance(app, Strict) else "constructed-relaxed"
        fam = build_construction(n, r)
        cert = certificate_for(fam, r, tag, version)
        return cert, {"method": tag, "status": "ok", "nodes": 0,
                      "elapsed": time.perf_counter() - t0}
    out = feasible_exact_profile(ProfileInstance(n, r, tuple(range(2, n - 1))),
                                 budget, config)
    entry = {"method": "search", "nodes": out.stats.nodes,
             "elapsed": out.stats.elapsed}
    if isinstance(out, Feasible):
        entry["status"] = "ok"
        return certificate_for(out.witness, r, "search", version), entry
    entry["status"] = "unknown" if isinstance(out, Unknown) else "refuted"
    return None, entry


def regenerate_corpus(destination, *, r2_range: tuple[int, int] | None = (4, 21),
                      r3_range: tuple[int, int] | None = (9, 24),
                      extra_r: Sequence[int] = (4,),
                      budget: SearchBudget | None = None,
                      config: SearchConfig | None = None,
                      version: str = "") -> dict:
    """Regenerate the certificate corpus under `destination`.

    Groups: r=2 over r2_range, r=3 over r3_range, and one n=2r+5 instance
    per entry of extra_r.  Instances are constructed when the construction
    applies and searched otherwise; anything the budget cannot settle is
    listed as unknown in the manifest instead of being written.
    """
    dest = Path(destination)
    dest.mkdir(parents=True, exist_ok=True)
    groups: list[tuple[str, list[tuple[int, int]]]] = []
    if r2_range is not None:
        a, b = r2_range
        groups.append((f"r2_n_{a}_to_{b}.txt", [(n, 2) for n in range(a, b + 1)]))
    if r3_range is not None:
        a, b = r3_range
        groups.append((f"r3_n_{a}_to_{b}.txt", [(n, 3) for n in range(a, b + 1)]))
    if extra_r:
        rs = sorted(extra_r)
        groups.append((f"2r_plus_5_r_{rs[0]}_to_{rs[-1]}.txt",
                       [(2 * r + 5, r) for r in rs]))
    manifest: dict = {"files": [], "entries": [], "unknown": []}
    for fname, instances in groups:
        certs = []
        for n, r in instances:
            cert, entry = _solve_instance(n, r, budget, config, version)
            entry.update({"n": n, "r": r, "file": fname if cert else None})
            manifest["entries"].append(entry)
            if cert is None:
                if entry["status"] == "unknown":
                    manifest["unknown"].append({"n": n, "r": r})
                continue
            report = verify_certificate(cert)
            if not report.matches_claim:
                raise AssertionError(f"regenerated certificate fails verification at (n={n}, r={r})")
            certs.append(cert)
        if certs:
            write_certificates(certs, dest / fname)
            manifest["files"].append(fname)
    (dest / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n",
                                        encoding="utf-8")
    return manifest
