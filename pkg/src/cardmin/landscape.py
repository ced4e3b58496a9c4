"""Per-class status tables for symmetric functions with 2..7 inputs.

Each NPN class gets exactly one status, assigned by a fixed priority:
constant, XOR, AND, equality, doubly symmetric, covered by the mod-3
protocol (verified live), published third-party protocols from the curated
data file, and finally open.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .errors import UnsupportedArity
from .symfun import (
    NpnClass,
    SymmetricFunction,
    and_function,
    enumerate_classes,
    equality_function,
    format_set,
    is_doubly_symmetric,
    majority_function,
    mod3_function,
    xor_function,
)

MIN_N, MAX_N = 2, 7


class Status(enum.Enum):
    TRIVIAL_CONSTANT = "TRIVIAL_CONSTANT"
    XOR = "XOR"
    AND = "AND"
    EQUALITY = "EQUALITY"
    DOUBLY_SYMMETRIC = "DOUBLY_SYMMETRIC"
    MOD3_OURS = "MOD3_OURS"
    SHIKATA_FINITE = "SHIKATA_FINITE"
    SHIKATA_LAS_VEGAS = "SHIKATA_LAS_VEGAS"
    OTHER_PUBLISHED = "OTHER_PUBLISHED"
    SOLVED_N_GE_8 = "SOLVED_N_GE_8"
    OPEN = "OPEN"


@dataclass(frozen=True)
class ProtocolRef:
    protocol: str
    year: int | None = None
    committed: bool | None = None
    shuffles: int | None = None
    las_vegas: bool = False

    def to_json(self) -> dict:
        return {"protocol": self.protocol, "year": self.year, "committed": self.committed,
                "shuffles": self.shuffles, "las_vegas": self.las_vegas}


@dataclass(frozen=True)
class CuratedEntry:
    n: int
    canonical: int
    function: int
    name: str | None
    ref: ProtocolRef


@lru_cache(maxsize=None)
def curated_entries() -> tuple[CuratedEntry, ...]:
    text = resources.files("cardmin").joinpath("data/curated_protocols.json").read_text("utf-8")
    entries = []
    for obj in json.loads(text):
        n = obj["n"]
        ref = ProtocolRef(obj["protocol"], obj["year"], obj["committed"], obj["shuffles"], obj["las_vegas"])
        entries.append(CuratedEntry(
            n,
            SymmetricFunction.from_set(n, obj["canonical_X"]).mask,
            SymmetricFunction.from_set(n, obj.get("function", obj["canonical_X"])).mask,
            obj.get("name"),
            ref,
        ))
    return tuple(entries)


# Attribution for classes covered only through the doubly-symmetric predicate.
_DOUBLY_SYMMETRIC_TECHNIQUE = ProtocolRef("Ruangwises-Itoh (doubly symmetric)", 2021)


@dataclass(frozen=True)
class ClassStatus:
    npn: NpnClass
    status: Status
    source: str
    name: str | None
    function: int
    protocols: tuple[ProtocolRef, ...] = ()
    verification: dict | None = None

    def to_json(self) -> dict:
        return {
            "canonical": str(self.npn.representative),
            "members": [str(f) for f in self.npn.functions()],
            "function": str(SymmetricFunction(self.npn.n, self.function)),
            "status": self.status.value,
            "source": self.source,
            "name": self.name,
            "protocols": [p.to_json() for p in self.protocols],
            "verification": self.verification,
        }

    @classmethod
    def from_json(cls, n: int, obj: dict) -> "ClassStatus":
        members = tuple(SymmetricFunction.parse(n, m).mask for m in obj["members"])
        npn = NpnClass(n, SymmetricFunction.parse(n, obj["canonical"]).mask, members)
        refs = tuple(ProtocolRef(**p) for p in obj["protocols"])
        return cls(npn, Status(obj["status"]), obj["source"], obj["name"],
                   SymmetricFunction.parse(n, obj["function"]).mask, refs, obj["verification"])


@dataclass(frozen=True)
class LandscapeReport:
    n: int
    rows: tuple[ClassStatus, ...]
    open_count: int
    summary: str | None = None

    def to_json(self) -> dict:
        return {"n": self.n, "open_count": self.open_count, "summary": self.summary,
                "rows": [r.to_json() for r in self.rows]}

    @classmethod
    def from_json(cls, obj: dict) -> "LandscapeReport":
        n = obj["n"]
        rows = tuple(ClassStatus.from_json(n, r) for r in obj["rows"])
        return cls(n, rows, obj["open_count"], obj.get("summary"))


def _class_name(npn: NpnClass) -> tuple[str | None, int | None]:
    n = npn.n
    named = [
        ("Constant", SymmetricFunction(n, 0)),
        ("XOR", xor_function(n)),
        ("AND", and_function(n)),
        ("Equality", equality_function(n)),
        ("Majority", majority_function(n)),
        ("Div3", mod3_function(n, 0)),
    ]
    for name, f in named:
        if f in npn:
            return name, f.mask
    return None, None


def verified_mod3(n: int, k: int) -> dict:
    from .verifier import verify_mod3

    return verify_mod3(n, k).to_json()


def _mod3_k(npn: NpnClass) -> int | None:
    for k in range(3):
        if mod3_function(npn.n, k) in npn:
            return k
    return None


def classify_class(npn: NpnClass, curated: list[CuratedEntry]) -> ClassStatus:
    n = npn.n
    name, named_mask = _class_name(npn)
    refs = tuple(e.ref for e in curated)
    display = curated[0].function if curated else (named_mask if named_mask is not None else npn.canonical)
    if npn.canonical == 0:
        return ClassStatus(npn, Status.TRIVIAL_CONSTANT, "derived-predicate", "Constant", npn.canonical)
    for status, f in ((Status.XOR, xor_function(n)), (Status.AND, and_function(n)),
                      (Status.EQUALITY, equality_function(n))):
        if f in npn:
            return ClassStatus(npn, status, "derived-predicate", name, display, refs)
    if any(is_doubly_symmetric(f) for f in npn.functions()):
        return ClassStatus(npn, Status.DOUBLY_SYMMETRIC, "derived-predicate", name, display,
                           refs or (_DOUBLY_SYMMETRIC_TECHNIQUE,))
    k = _mod3_k(npn)
    if k is not None:
        report = verified_mod3(n, k)
        if not report["passed"]:
            raise RuntimeError(f"mod-3 protocol failed verification for n={n}, k={k}")
        ours = ProtocolRef(f"Ours (mod3:{n}:{k})", None, report["committed_format"], report["shuffle_count"])
        summary = {key: report[key] for key in ("protocol_name", "function", "correctness", "privacy",
                                                "shuffle_count", "passed")}
        summary["deck"] = report["deck"]["cards"]
        return ClassStatus(npn, Status.MOD3_OURS, "verified-here", name,
                           mod3_function(n, k).mask, (ours,) + refs, summary)
    if curated:
        shikata = [e for e in curated if e.ref.protocol.startswith("Shikata")]
        if shikata:
            lv = any(e.ref.las_vegas for e in shikata)
            status = Status.SHIKATA_LAS_VEGAS if lv else Status.SHIKATA_FINITE
        else:
            status = Status.OTHER_PUBLISHED
        return ClassStatus(npn, status, "paper-table", name, display, refs)
    return ClassStatus(npn, Status.OPEN, "derived-predicate", name, display)


def classify_landscape(n: int) -> LandscapeReport:
    if n > MAX_N:
        return LandscapeReport(n, (), 0, f"{Status.SOLVED_N_GE_8.value}: every symmetric function "
                                         f"with n >= 8 inputs has a 2n-card protocol")
    if n < MIN_N:
        raise UnsupportedArity(f"landscape covers n = {MIN_N}..{MAX_N}, got {n}")
    by_class: dict[int, list[CuratedEntry]] = {}
    for entry in curated_entries():
        if entry.n == n:
            by_class.setdefault(entry.canonical, []).append(entry)
    rows = tuple(classify_class(c, by_class.get(c.canonical, [])) for c in enumerate_classes(n))
    open_count = sum(r.status is Status.OPEN for r in rows)
    return LandscapeReport(n, rows, open_count)


def _fn(n: int, mask: int) -> str:
    return f"S^{n}_" + format_set(SymmetricFunction(n, mask).accepted)


def _ref_cells(ref: ProtocolRef) -> tuple[str, str, str]:
    name = ref.protocol + (f", {ref.year}" if ref.year else "")
    committed = {True: "yes", False: "no", None: "--"}[ref.committed]
    if ref.shuffles is None:
        shuffles = "--"
    elif ref.las_vegas:
        shuffles = f"≈ {ref.shuffles}*"
    else:
        shuffles = str(ref.shuffles)
    return name, committed, shuffles


def render_table(report: LandscapeReport) -> str:
    if report.summary is not None:
        return f"n = {report.n}: {report.summary}\n"
    header = ("Function", "Name", "Protocol", "Committed?", "#Shuffles", "Same-class functions", "Status")
    lines: list[tuple[str, ...]] = []
    n = report.n
    for row in report.rows:
        others = ", ".join(_fn(n, m) for m in row.npn.members if m != row.function)
        first = (_fn(n, row.function), row.name or "--")
        tail = (others, row.status.value)
        if row.status is Status.TRIVIAL_CONSTANT:
            lines.append(first + ("trivial", "", "") + tail)
        elif row.status is Status.OPEN:
            lines.append(first + ("open problem", "", "") + tail)
        else:
            for i, ref in enumerate(row.protocols):
                lead = first if i == 0 else ("", "")
                lines.append(lead + _ref_cells(ref) + (tail if i == 0 else ("", "")))
    widths = [max(len(r[i]) for r in lines + [header]) for i in range(len(header))]
    fmt = lambda cells: " | ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()
    sep = "-+-".join("-" * w for w in widths)
    out = [fmt(header), sep] + [fmt(r) for r in lines]
    out.append(f"classes: {len(report.rows)}, open: {report.open_count}")
    return "\n".join(out) + "\n"


def render(report: LandscapeReport, format: str = "table") -> str:
    if format == "json":
        return json.dumps(report.to_json(), indent=2, ensure_ascii=False) + "\n"
    if format == "table":
        return render_table(report)
    raise ValueError(f"unknown format {format!r}")


def parse(text: str) -> LandscapeReport:
    return LandscapeReport.from_json(json.loads(text))


def doubly_symmetric_new(report: LandscapeReport) -> int:
    """Classes covered through the doubly-symmetric predicate alone."""
    return sum(r.status is Status.DOUBLY_SYMMETRIC for r in report.rows)


def status_counts(report: LandscapeReport) -> dict[str, int]:
    counts: dict[str, int] = {}
    for r in report.rows:
        counts[r.status.value] = counts.get(r.status.value, 0) + 1
    return counts
