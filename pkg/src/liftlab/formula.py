"""CNF formulas, assignments and block structure.

Literals are signed DIMACS integers: ``v`` is the positive literal of
variable ``v`` and ``-v`` its negation. A clause is a tuple of literals
sorted by variable index. Clause indices exposed to callers are 1-based,
matching the proof formats.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence, Union

Clause = tuple  # tuple[int, ...]
PartialAssignment = Mapping[int, int]
BlockValue = Union[tuple, None]


class FormulaError(ValueError):
    pass


def make_clause(literals: Iterable[int], allow_tautology: bool = False) -> Clause:
    lits = set()
    for lit in literals:
        lit = int(lit)
        if lit == 0:
            raise FormulaError("literal 0 is not a literal")
        lits.add(lit)
    if not allow_tautology and any(-lit in lits for lit in lits):
        raise FormulaError(f"tautological clause {sorted(lits, key=abs)}")
    return tuple(sorted(lits, key=lambda lit: (abs(lit), lit)))


def is_tautology(clause: Clause) -> bool:
    s = set(clause)
    return any(-lit in s for lit in s)


def clause_vars(clause: Clause) -> set:
    return {abs(lit) for lit in clause}


def literal_value(lit: int, value: int) -> int:
    """Truth value of ``lit`` when its variable takes ``value``."""
    return value if lit > 0 else 1 - value


@dataclass(frozen=True)
class CnfFormula:
    var_count: int
    clauses: tuple

    def __post_init__(self):
        if self.var_count < 0:
            raise FormulaError("negative variable count")
        canon = []
        for clause in self.clauses:
            clause = make_clause(clause)
            for lit in clause:
                if abs(lit) > self.var_count:
                    raise FormulaError(
                        f"literal {lit} out of range 1..{self.var_count}")
            canon.append(clause)
        object.__setattr__(self, "clauses", tuple(canon))

    def __len__(self):
        return len(self.clauses)

    def clause(self, k: int) -> Clause:
        """The 1-based ``k``-th clause."""
        if not 1 <= k <= len(self.clauses):
            raise IndexError(f"clause index {k} out of range")
        return self.clauses[k - 1]

    @property
    def width(self) -> int:
        return max((len(c) for c in self.clauses), default=0)

    def has_empty_clause(self) -> bool:
        return any(len(c) == 0 for c in self.clauses)

    def key(self) -> tuple:
        """Order-insensitive canonical form, used as a memo key."""
        return tuple(sorted(set(self.clauses)))


def parse_dimacs(text: Union[str, bytes]) -> CnfFormula:
    """Parse DIMACS CNF. Clause order is preserved."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    header = None
    tokens: list = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            break
        if line.startswith("p"):
            if header is not None:
                raise FormulaError("duplicate problem line")
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise FormulaError(f"malformed header: {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormulaError(f"malformed header: {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise FormulaError(f"malformed header: {line!r}")
            continue
        if header is None:
            raise FormulaError("clause before problem line")
        try:
            tokens.extend(int(t) for t in line.split())
        except ValueError:
            raise FormulaError(f"bad clause line: {line!r}") from None
    if header is None:
        raise FormulaError("missing problem line")
    n, m = header
    clauses, current = [], []
    for tok in tokens:
        if tok == 0:
            clauses.append(current)
            current = []
        else:
            if abs(tok) > n:
                raise FormulaError(f"literal {tok} out of range 1..{n}")
            current.append(tok)
    if current:
        raise FormulaError("last clause not terminated by 0")
    if len(clauses) != m:
        raise FormulaError(f"header declares {m} clauses, found {len(clauses)}")
    return CnfFormula(n, tuple(make_clause(c) for c in clauses))


def to_dimacs(formula: CnfFormula, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p cnf {formula.var_count} {len(formula.clauses)}")
    for clause in formula.clauses:
        lines.append(" ".join(str(lit) for lit in clause + (0,)))
    return "\n".join(lines) + "\n"


def restrict(formula: CnfFormula, assignment: PartialAssignment) -> CnfFormula:
    """Apply a partial assignment: satisfied clauses vanish, falsified
    literals are dropped, and an empty clause is kept if produced."""
    out = []
    for clause in formula.clauses:
        kept = []
        satisfied = False
        for lit in clause:
            value = assignment.get(abs(lit))
            if value is None:
                kept.append(lit)
            elif literal_value(lit, value):
                satisfied = True
                break
        if not satisfied:
            out.append(tuple(kept))
    return CnfFormula(formula.var_count, tuple(out))


def _total(formula: CnfFormula, z) -> Sequence[int]:
    if isinstance(z, Mapping):
        missing = [v for v in range(1, formula.var_count + 1) if v not in z]
        if missing:
            raise FormulaError(f"assignment is partial: variables {missing} unset")
        return [None] + [z[v] for v in range(1, formula.var_count + 1)]
    z = list(z)
    if len(z) != formula.var_count or any(b not in (0, 1) for b in z):
        raise FormulaError("assignment must assign 0/1 to every variable")
    return [None] + z


def falsified_clauses(formula: CnfFormula, z) -> frozenset:
    """1-based indices of clauses falsified by the total assignment ``z``
    (a 0/1 sequence for variables 1..n, or a mapping)."""
    values = _total(formula, z)
    return frozenset(
        k for k, clause in enumerate(formula.clauses, start=1)
        if not any(literal_value(lit, values[abs(lit)]) for lit in clause))


@dataclass(frozen=True)
class BlockStructure:
    """Partition of variables 1..n*l into ``block_count`` blocks of
    ``block_size`` variables each. Blocks are 1-indexed."""

    block_count: int
    block_size: int
    blocks: tuple
    _where: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        blocks = tuple(tuple(int(v) for v in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if len(blocks) != self.block_count:
            raise FormulaError("block list length differs from block_count")
        if any(len(b) != self.block_size for b in blocks):
            raise FormulaError("every block must have block_size variables")
        flat = sorted(v for b in blocks for v in b)
        if flat != list(range(1, self.block_count * self.block_size + 1)):
            raise FormulaError("blocks must partition 1..block_count*block_size")
        where = {v: (i, j) for i, b in enumerate(blocks, start=1)
                 for j, v in enumerate(b, start=1)}
        object.__setattr__(self, "_where", where)

    @classmethod
    def contiguous(cls, block_count: int, block_size: int) -> "BlockStructure":
        return cls(block_count, block_size, tuple(
            tuple(range(i * block_size + 1, (i + 1) * block_size + 1))
            for i in range(block_count)))

    @classmethod
    def unit(cls, var_count: int) -> "BlockStructure":
        return cls.contiguous(var_count, 1)

    @property
    def var_count(self) -> int:
        return self.block_count * self.block_size

    def locate(self, var: int) -> tuple:
        """(block, offset) of a variable, both 1-based."""
        try:
            return self._where[var]
        except KeyError:
            raise FormulaError(f"variable {var} not covered by blocks") from None

    def block_of(self, var: int) -> int:
        return self.locate(var)[0]

    def to_json(self) -> str:
        return json.dumps({"block_count": self.block_count,
                           "block_size": self.block_size,
                           "blocks": [list(b) for b in self.blocks]},
                          indent=1, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BlockStructure":
        doc = json.loads(text)
        try:
            return cls(doc["block_count"], doc["block_size"], doc["blocks"])
        except KeyError as e:
            raise FormulaError(f"block file missing field {e}") from None


def touched_blocks(clause: Iterable[int], blocks: BlockStructure) -> tuple:
    return tuple(sorted({blocks.block_of(abs(lit)) for lit in clause}))


def clause_block_width(clause: Iterable[int], blocks: BlockStructure) -> int:
    """Number of blocks the clause (or conjunction) touches."""
    return len(touched_blocks(clause, blocks))


def free_blocks(rho: Sequence[BlockValue]) -> tuple:
    return tuple(i for i, v in enumerate(rho, start=1) if v is None)


def fixed_blocks(rho: Sequence[BlockValue]) -> tuple:
    return tuple(i for i, v in enumerate(rho, start=1) if v is not None)


def in_cube(rho: Sequence[BlockValue], z: Sequence[Sequence[int]]) -> bool:
    """Membership of a block string ``z`` in Cube(rho)."""
    if len(rho) != len(z):
        raise FormulaError("dimension mismatch between rho and z")
    return all(v is None or tuple(v) == tuple(zi) for v, zi in zip(rho, z))


def check_block_assignment(rho: Sequence[BlockValue], n: int, ell: int) -> None:
    if len(rho) != n:
        raise FormulaError(f"rho has {len(rho)} blocks, expected {n}")
    for v in rho:
        if v is not None and (len(v) != ell or any(b not in (0, 1) for b in v)):
            raise FormulaError(f"block value {v!r} is not an {ell}-bit string")
