"""Weighted CNF text formats.

Native dialect::

    p cnf <nvars> <nclauses>
    w <var> <w_true> <w_false>      one line per weighted variable
    <lit> <lit> ... 0               one line per clause

The ``dpmc`` dialect replaces each ``w`` line by two comment lines
``c p weight <var> <w_true> 0`` and ``c p weight -<var> <w_false> 0``.
Weights are printed with 17 significant digits so doubles round-trip.

Representations are written with their variables renumbered ``1..N`` and a
sidecar header of comment lines::

    c rep scalar
    c rep matrix <q> <kind>
    c x <digit> <var> ...           input string, least significant digit first
    c y <digit> <var> ...           output string
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cnf import to_cnf
from .errors import ExportError, WcnfParseError
from .logic import CnfFormula, VarPool, WeightFunction, variables

DIALECTS = ("native", "dpmc")


def _num(w: complex) -> str:
    w = complex(w)
    if w.imag != 0:
        raise ExportError("complex weights not exportable")
    return format(w.real, ".17g")


def export_wcnf(cnf: CnfFormula, W: WeightFunction, dialect: str = "native", header: list[str] | None = None) -> str:
    """Render ``(cnf, W)`` in the chosen dialect; ``header`` lines become ``c`` comments."""
    if dialect not in DIALECTS:
        raise ExportError(f"unknown dialect {dialect!r}; expected one of {DIALECTS}")
    nvars = max([cnf.num_vars, *W])
    lines = [f"c {h}" for h in header or ()]
    lines.append(f"p cnf {nvars} {len(cnf.clauses)}")
    for v in sorted(W):
        w0, w1 = W[v]
        if dialect == "native":
            lines.append(f"w {v} {_num(w1)} {_num(w0)}")
        else:
            lines.append(f"c p weight {v} {_num(w1)} 0")
            lines.append(f"c p weight {-v} {_num(w0)} 0")
    for clause in cnf.clauses:
        lines.append(" ".join([*map(str, clause), "0"]))
    return "\n".join(lines) + "\n"


@dataclass
class WcnfInstance:
    cnf: CnfFormula
    weights: WeightFunction
    comments: list[str] = field(default_factory=list)
    rep_kind: str | None = None
    q: int | None = None
    encoding: str | None = None
    x: dict[int, tuple[int, ...]] = field(default_factory=dict)
    y: dict[int, tuple[int, ...]] = field(default_factory=dict)


def _float(tok: str, lineno: int) -> float:
    try:
        return float(tok)
    except ValueError:
        raise WcnfParseError(f"line {lineno}: bad weight {tok!r}") from None


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise WcnfParseError(f"line {lineno}: expected an integer, got {tok!r}") from None


def parse_wcnf(text: str) -> WcnfInstance:
    """Parse either dialect (they may even be mixed).

    Variables ``1..nvars`` without a weight line get weight ``(1, 1)``.
    """
    header: tuple[int, int] | None = None
    weights: dict[int, list] = {}
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    inst = WcnfInstance(CnfFormula(0, ()), WeightFunction())

    def set_weight(v: int, pos: int, value: float, lineno: int) -> None:
        slot = weights.setdefault(v, [None, None])
        if slot[pos] is not None:
            raise WcnfParseError(f"line {lineno}: duplicate weight for literal {v if pos else -v}")
        slot[pos] = value

    for lineno, raw in enumerate(text.splitlines(), 1):
        toks = raw.split()
        if not toks:
            continue
        if toks[0] == "c":
            if toks[1:3] == ["p", "weight"]:
                if len(toks) not in (5, 6) or (len(toks) == 6 and toks[5] != "0"):
                    raise WcnfParseError(f"line {lineno}: malformed weight comment")
                l = _int(toks[3], lineno)
                if l == 0:
                    raise WcnfParseError(f"line {lineno}: literal 0 in weight line")
                set_weight(abs(l), 1 if l > 0 else 0, _float(toks[4], lineno), lineno)
            elif toks[1:2] == ["rep"] and len(toks) >= 3:
                inst.rep_kind = toks[2]
                if toks[2] == "matrix":
                    if len(toks) != 5:
                        raise WcnfParseError(f"line {lineno}: expected 'c rep matrix <q> <kind>'")
                    inst.q, inst.encoding = _int(toks[3], lineno), toks[4]
            elif toks[1:2] in (["x"], ["y"]) and len(toks) >= 3:
                side = inst.x if toks[1] == "x" else inst.y
                side[_int(toks[2], lineno)] = tuple(_int(t, lineno) for t in toks[3:])
            else:
                inst.comments.append(raw[1:].strip())
            continue
        if toks[0] == "p":
            if header is not None:
                raise WcnfParseError(f"line {lineno}: second problem line")
            if len(toks) != 4 or toks[1] not in ("cnf", "wcnf"):
                raise WcnfParseError(f"line {lineno}: expected 'p cnf <nvars> <nclauses>'")
            header = (_int(toks[2], lineno), _int(toks[3], lineno))
            continue
        if header is None:
            raise WcnfParseError(f"line {lineno}: data before the problem line")
        if toks[0] == "w":
            if len(toks) != 4:
                raise WcnfParseError(f"line {lineno}: expected 'w <var> <w_true> <w_false>'")
            v = _int(toks[1], lineno)
            if v <= 0:
                raise WcnfParseError(f"line {lineno}: weight line needs a positive variable")
            set_weight(v, 1, _float(toks[2], lineno), lineno)
            set_weight(v, 0, _float(toks[3], lineno), lineno)
            continue
        for t in toks:
            l = _int(t, lineno)
            if l == 0:
                clauses.append(tuple(pending))
                pending = []
            else:
                if abs(l) > header[0]:
                    raise WcnfParseError(f"line {lineno}: literal {l} exceeds {header[0]} variables")
                pending.append(l)
    if header is None:
        raise WcnfParseError("missing problem line")
    if pending:
        raise WcnfParseError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise WcnfParseError(f"header announces {header[1]} clauses, found {len(clauses)}")
    entries = {}
    for v, (w0, w1) in weights.items():
        if w0 is None or w1 is None:
            raise WcnfParseError(f"variable {v} has a weight for only one polarity")
        if v > header[0]:
            raise WcnfParseError(f"weighted variable {v} exceeds {header[0]} variables")
        entries[v] = (w0, w1)
    for v in range(1, header[0] + 1):
        entries.setdefault(v, (1.0, 1.0))
    inst.cnf = CnfFormula(header[0], tuple(clauses))
    inst.weights = WeightFunction(entries)
    return inst


def export_rep(rep, dialect: str = "native") -> str:
    """Serialize a scalar or matrix representation with its sidecar header."""
    from .reps import MatrixRep

    pool = VarPool(1)
    pool.reserve(max([0, *rep.W, *variables(rep.phi)]))
    cnf, aux = to_cnf(rep.phi, pool)
    W = rep.W.union(aux)
    order = sorted(W)
    mapping = {v: i + 1 for i, v in enumerate(order)}

    def ren(l: int) -> int:
        return mapping[l] if l > 0 else -mapping[-l]

    compact = CnfFormula(len(order), tuple(tuple(ren(l) for l in c) for c in cnf.clauses))
    header: list[str] = []
    if isinstance(rep, MatrixRep):
        header.append(f"rep matrix {rep.q} {rep.kind}")
        for name, s in (("x", rep.x), ("y", rep.y)):
            for i, d in enumerate(s):
                header.append(" ".join([name, str(i), *(str(mapping[v]) for v in d.vars)]))
    else:
        header.append("rep scalar")
    return export_wcnf(compact, W.rename(mapping), dialect, header)


def load_rep(inst: WcnfInstance):
    """Rebuild a representation from a parsed instance with a sidecar header."""
    from .encodings import EncodingString, QStateEncoding
    from .reps import MatrixRep, ScalarRep

    phi = inst.cnf.to_formula()
    if inst.rep_kind != "matrix":
        return ScalarRep(phi, inst.weights)

    def string(side: dict[int, tuple[int, ...]]) -> EncodingString:
        if sorted(side) != list(range(len(side))):
            raise WcnfParseError("digit indices of a string must be 0..k-1")
        return EncodingString(tuple(QStateEncoding(inst.q, inst.encoding, side[i]) for i in range(len(side))))

    return MatrixRep(phi, inst.weights, string(inst.x), string(inst.y), inst.q, inst.encoding)


__all__ = ["DIALECTS", "WcnfInstance", "export_rep", "export_wcnf", "load_rep", "parse_wcnf"]
