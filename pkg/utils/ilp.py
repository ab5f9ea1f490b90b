import hashlib
import logging
import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor, gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

from utils.linear import LinConstraint

logger = logging.getLogger(__name__)

# exact integer feasibility: integer rows, bound propagation, small boxes enumerated,
# otherwise branch-and-bound over a rational simplex relaxation with a diving heuristic

DEFAULT_ENUM_VOLUME = 64
PROPAGATION_PASSES = 25
SIMPLEX_ITERATION_CAP = 200000
# nodes between two dives (the root always dives)
DIVE_FREQUENCY = 16

# (coefficients by variable position, 'le' | 'eq', right-hand side)
Row = Tuple[Tuple[Tuple[int, int], ...], str, int]


class UnboundedVariableError(ValueError):
    """Raised when an ILP variable has no finite upper bound."""
    pass


@dataclass(frozen=True)
class ILPVariable:
    id: int
    upper: Optional[int]
    name: str = ''

    @property
    def label(self) -> str:
        return self.name or f"x{self.id}"


@dataclass(frozen=True)
class ILPInstance:
    variables: Tuple[ILPVariable, ...]
    constraints: Tuple[LinConstraint, ...]

    def __post_init__(self):
        declared = {v.id for v in self.variables}
        if len(declared) != len(self.variables):
            raise ValueError("Duplicate ILP variable ids.")
        for constraint in self.constraints:
            unknown = (set(constraint.lhs.terms) | set(constraint.rhs.terms)) - declared
            if unknown:
                raise ValueError(f"Constraint references undeclared variables: {sorted(unknown, key=repr)}")


@dataclass(frozen=True)
class Witness:
    assignment: Dict[int, int]

    def __getitem__(self, var_id: int) -> int:
        return self.assignment[var_id]


class _Infeasible(Exception):
    pass


def _normalize(constraint: LinConstraint, position: Dict[int, int]) -> List[Row]:
    diff = constraint.difference
    items = [(position[k], Fraction(v)) for k, v in diff.terms.items() if v]
    constant = Fraction(diff.constant)
    scale = lcm(constant.denominator, *(v.denominator for _, v in items)) if items else constant.denominator
    coeffs = [(j, int(v * scale)) for j, v in sorted(items)]
    rhs = int(-constant * scale)
    rel = constraint.rel

    if not coeffs:
        ok = {'<': 0 < rhs, '<=': 0 <= rhs, '=': rhs == 0, '>=': 0 >= rhs, '>': 0 > rhs}[rel]
        if not ok:
            raise _Infeasible()
        return []

    # integer-valued left side: strict becomes non-strict with slack one
    if rel in ('>=', '>'):
        coeffs = [(j, -a) for j, a in coeffs]
        rhs = -rhs
    if rel in ('<', '>'):
        rhs -= 1
    g = 0
    for _, a in coeffs:
        g = gcd(g, a)
    if rel == '=':
        if rhs % g:
            raise _Infeasible()
        return [(tuple((j, a // g) for j, a in coeffs), 'eq', rhs // g)]
    return [(tuple((j, a // g) for j, a in coeffs), 'le', rhs // g)]


def _row_holds(row: Row, x: Sequence) -> bool:
    coeffs, sense, rhs = row
    value = sum(a * x[j] for j, a in coeffs)
    return value == rhs if sense == 'eq' else value <= rhs


def _propagate(rows: Sequence[Row], lo: List[int], hi: List[int]) -> bool:
    # interval tightening; returns False once some row cannot be met
    for _ in range(PROPAGATION_PASSES):
        changed = False
        for coeffs, sense, rhs in rows:
            for d in ((1,) if sense == 'le' else (1, -1)):
                bound = d * rhs
                min_act = sum(d * a * (lo[j] if d * a > 0 else hi[j]) for j, a in coeffs)
                if min_act > bound:
                    return False
                for j, a in coeffs:
                    ca = d * a
                    if ca > 0:
                        new_hi = (bound - (min_act - ca * lo[j])) // ca
                        if new_hi < hi[j]:
                            hi[j] = new_hi
                            changed = True
                    else:
                        new_lo = -((bound - (min_act - ca * hi[j])) // -ca)
                        if new_lo > lo[j]:
                            lo[j] = new_lo
                            changed = True
                    if lo[j] > hi[j]:
                        return False
        if not changed:
            break
    return True


def _volume_at_most(lo: Sequence[int], hi: Sequence[int], limit: int) -> bool:
    volume = 1
    for a, b in zip(lo, hi):
        volume *= b - a + 1
        if volume > limit:
            return False
    return True


def _enumerate(rows: Sequence[Row], lo: Sequence[int], hi: Sequence[int]) -> Optional[List[int]]:
    for point in product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if all(_row_holds(row, point) for row in rows):
            return list(point)
    return None


# phase-one bounded-variable simplex with Bland's rule

def _lp_relaxation(rows: Sequence[Row], lo: Sequence[int], hi: Sequence[int]) -> Optional[List[Fraction]]:
    nv = len(lo)
    lower: List[Fraction] = [Fraction(v) for v in lo]
    upper: List[Optional[Fraction]] = [Fraction(v) for v in hi]
    matrix: List[Dict[int, int]] = []
    rhs: List[int] = []
    for coeffs, sense, b in rows:
        row = dict(coeffs)
        if sense == 'le':
            min_act = sum(a * (lo[j] if a > 0 else hi[j]) for j, a in coeffs)
            max_act = sum(a * (hi[j] if a > 0 else lo[j]) for j, a in coeffs)
            if max_act <= b:
                continue
            if min_act > b:
                return None
            row[len(lower)] = 1
            lower.append(Fraction(0))
            upper.append(Fraction(b - min_act))
        matrix.append(row)
        rhs.append(b)

    ncols = len(lower)
    r = len(matrix)
    if r == 0:
        return lower[:nv]

    tableau: List[List[Fraction]] = []
    values: List[Fraction] = []
    basis: List[int] = []
    for i, (row, b) in enumerate(zip(matrix, rhs)):
        resid = b - sum(a * lower[j] for j, a in row.items())
        sign = 1 if resid >= 0 else -1
        line = [Fraction(0)] * (ncols + r)
        for j, a in row.items():
            line[j] = Fraction(sign * a)
        line[ncols + i] = Fraction(1)
        tableau.append(line)
        values.append(Fraction(sign * resid))
        basis.append(ncols + i)
        lower.append(Fraction(0))
        upper.append(None)

    total = ncols + r
    reduced = [-sum(tableau[i][j] for i in range(r)) for j in range(ncols)] + [Fraction(0)] * r
    at_upper = [False] * total
    is_basic = [False] * ncols + [True] * r

    for _ in range(SIMPLEX_ITERATION_CAP):
        entering, direction = None, 0
        for j in range(total):
            if is_basic[j]:
                continue
            if not at_upper[j] and reduced[j] < 0 and (upper[j] is None or upper[j] > lower[j]):
                entering, direction = j, 1
                break
            if at_upper[j] and reduced[j] > 0:
                entering, direction = j, -1
                break
        if entering is None:
            break

        j = entering
        best: Optional[Tuple[Fraction, int, Optional[int]]] = None
        if upper[j] is not None:
            best = (upper[j] - lower[j], j, None)
        for i in range(r):
            rate = -tableau[i][j] * direction
            var = basis[i]
            if rate < 0:
                step = (values[i] - lower[var]) / -rate
            elif rate > 0 and upper[var] is not None:
                step = (upper[var] - values[i]) / rate
            else:
                continue
            if best is None or (step, var) < best[:2]:
                best = (step, var, i)
        if best is None:
            raise RuntimeError("Phase-one objective unbounded; the relaxation is malformed.")

        step, _, row_index = best
        if step:
            for i in range(r):
                if tableau[i][j]:
                    values[i] -= tableau[i][j] * direction * step
        if row_index is None:
            at_upper[j] = not at_upper[j]
            continue

        leaving = basis[row_index]
        leaves_upper = -tableau[row_index][j] * direction > 0
        start = upper[j] if at_upper[j] else lower[j]
        values[row_index] = start + direction * step
        basis[row_index] = j
        is_basic[j], is_basic[leaving] = True, False
        at_upper[j] = False
        at_upper[leaving] = leaves_upper
        if leaving >= ncols:
            # artificial left the basis: pin it at zero
            upper[leaving] = Fraction(0)
            at_upper[leaving] = False

        pivot_row = tableau[row_index]
        pivot = pivot_row[j]
        if pivot != 1:
            pivot_row[:] = [v / pivot for v in pivot_row]
        for i in range(r):
            if i != row_index and tableau[i][j]:
                factor = tableau[i][j]
                line = tableau[i]
                for col, v in enumerate(pivot_row):
                    if v:
                        line[col] -= factor * v
        if reduced[j]:
            factor = reduced[j]
            for col, v in enumerate(pivot_row):
                if v:
                    reduced[col] -= factor * v
    else:
        raise RuntimeError("Simplex iteration cap reached.")

    infeasibility = sum(values[i] for i in range(r) if basis[i] >= ncols)
    if infeasibility > 0:
        return None
    point = [upper[j] if at_upper[j] else lower[j] for j in range(nv)]
    for i in range(r):
        if basis[i] < nv:
            point[basis[i]] = values[i]
    return point


def _integral_point(rows: Sequence[Row], point: Sequence[Fraction]) -> Optional[List[int]]:
    if any(v.denominator != 1 for v in point):
        return None
    candidate = [int(v) for v in point]
    return candidate if all(_row_holds(row, candidate) for row in rows) else None


def _dive(rows: Sequence[Row], lo: Sequence[int], hi: Sequence[int], point: List[Fraction]) -> Optional[List[int]]:
    # fix one fractional variable per step to its nearer integer, the other one if that fails;
    # fixed variables stay integral, so at most one step per variable
    lo, hi = list(lo), list(hi)
    for _ in range(len(lo) + 1):
        fractional = [j for j, v in enumerate(point) if v.denominator != 1]
        if not fractional:
            return _integral_point(rows, point)
        j = min(fractional, key=lambda k: (abs(point[k] - floor(point[k] + Fraction(1, 2))), k))
        nearest = floor(point[j] + Fraction(1, 2))
        for value in (nearest, 2 * floor(point[j]) + 1 - nearest):
            trial_lo, trial_hi = list(lo), list(hi)
            trial_lo[j] = trial_hi[j] = value
            if not _propagate(rows, trial_lo, trial_hi):
                continue
            trial = _lp_relaxation(rows, trial_lo, trial_hi)
            if trial is not None:
                lo, hi, point = trial_lo, trial_hi, trial
                break
        else:
            return None
    return None


def _branch_and_bound(rows: Sequence[Row], lo: List[int], hi: List[int], enum_volume: int) -> Optional[List[int]]:
    stack = [(lo, hi)]
    nodes = 0
    while stack:
        lo, hi = stack.pop()
        nodes += 1
        lo, hi = list(lo), list(hi)
        if not _propagate(rows, lo, hi):
            continue
        if _volume_at_most(lo, hi, enum_volume):
            found = _enumerate(rows, lo, hi)
            if found is not None:
                logger.info(f"ILP factible tras {nodes} nodos.")
                return found
            continue
        point = _lp_relaxation(rows, lo, hi)
        if point is None:
            continue
        fractional = [(abs(v - floor(v) - Fraction(1, 2)), j) for j, v in enumerate(point) if v.denominator != 1]
        if not fractional:
            candidate = _integral_point(rows, point)
            if candidate is not None:
                logger.info(f"ILP factible tras {nodes} nodos.")
                return candidate
            continue
        if (nodes - 1) % DIVE_FREQUENCY == 0:
            found = _dive(rows, lo, hi, point)
            if found is not None:
                logger.info(f"ILP factible por inmersión tras {nodes} nodos.")
                return found
        # most fractional variable, lowest position on ties; floor branch explored first
        _, j = min(fractional)
        down_hi, up_lo = list(hi), list(lo)
        down_hi[j] = floor(point[j])
        up_lo[j] = floor(point[j]) + 1
        stack.append((up_lo, hi))
        stack.append((lo, down_hi))
    logger.info(f"ILP infactible tras {nodes} nodos.")
    return None


# plain-text LP-like rendering with exact fractions

def dump_lp(inst: ILPInstance) -> str:
    names = {v.id: v.label for v in inst.variables}
    lines = ['\\ integer feasibility instance', 'subject to']
    for i, constraint in enumerate(inst.constraints):
        lines.append(f" c{i}: {constraint.render(lambda k: names[k])}")
    lines.append('bounds')
    for v in inst.variables:
        upper = 'inf' if v.upper is None else str(v.upper)
        lines.append(f" 0 <= {v.label} <= {upper}")
    lines.append('general')
    lines.append(' ' + ' '.join(v.label for v in inst.variables))
    lines.append('end')
    return '\n'.join(lines) + '\n'


def _write_dump(inst: ILPInstance, dump_dir: str) -> None:
    text = dump_lp(inst)
    os.makedirs(dump_dir, exist_ok=True)
    path = os.path.join(dump_dir, f"ilp_{hashlib.sha1(text.encode('utf-8')).hexdigest()[:12]}.lp")
    with open(path, 'w', encoding='utf-8') as f:
        f.write(text)
    logger.info(f"Instancia ILP escrita en {path}.")


def solve_feasibility(inst: ILPInstance, enum_volume: int = DEFAULT_ENUM_VOLUME,
                      dump_dir: Optional[str] = None) -> Optional[Witness]:
    # a satisfying integer assignment, or None when the instance is infeasible

    for v in inst.variables:
        if v.upper is None or v.upper < 0:
            raise UnboundedVariableError(f"Variable {v.label} needs a finite nonnegative upper bound.")
    if dump_dir:
        _write_dump(inst, dump_dir)

    ordered = sorted(inst.variables, key=lambda v: v.id)
    position = {v.id: j for j, v in enumerate(ordered)}
    try:
        rows = [row for c in inst.constraints for row in _normalize(c, position)]
    except _Infeasible:
        logger.info("ILP infactible al normalizar.")
        return None

    solution = _branch_and_bound(rows, [0] * len(ordered), [v.upper for v in ordered], enum_volume)
    if solution is None:
        return None
    witness = Witness({v.id: solution[position[v.id]] for v in ordered})
    if not all(c.holds(witness.assignment) for c in inst.constraints):
        raise RuntimeError("ILP witness failed exact re-verification.")
    return witness
