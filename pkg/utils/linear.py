from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, Mapping, Optional, Union

Number = Union[int, Fraction]

RELATIONS = ('<', '<=', '=', '>=', '>')


class LinExpr:
    """Sum of coefficient * variable terms plus a constant; variables are any hashable keys."""

    __slots__ = ('terms', 'constant')

    def __init__(self, terms: Optional[Mapping[Hashable, Number]] = None, constant: Number = 0):
        self.terms: Dict[Hashable, Number] = {k: v for k, v in (terms or {}).items() if v}
        self.constant = constant

    @classmethod
    def var(cls, key: Hashable, coefficient: Number = 1) -> 'LinExpr':
        return cls({key: coefficient})

    @classmethod
    def const(cls, value: Number) -> 'LinExpr':
        return cls(None, value)

    @classmethod
    def sum(cls, exprs: Iterable['LinExpr']) -> 'LinExpr':
        terms: Dict[Hashable, Number] = {}
        constant: Number = 0
        for e in exprs:
            for k, v in e.terms.items():
                terms[k] = terms.get(k, 0) + v
            constant += e.constant
        return cls(terms, constant)

    def _combine(self, other: Union['LinExpr', Number], sign: int) -> 'LinExpr':
        if not isinstance(other, LinExpr):
            return LinExpr(self.terms, self.constant + sign * other)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + sign * v
        return LinExpr(terms, self.constant + sign * other.constant)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self) -> 'LinExpr':
        return LinExpr({k: -v for k, v in self.terms.items()}, -self.constant)

    def __mul__(self, factor: Number) -> 'LinExpr':
        return LinExpr({k: v * factor for k, v in self.terms.items()}, self.constant * factor)

    __rmul__ = __mul__

    def evaluate(self, assignment: Mapping[Hashable, Number]) -> Fraction:
        return Fraction(self.constant) + sum((v * assignment.get(k, 0) for k, v in self.terms.items()), Fraction(0))

    def substitute(self, mapping: Mapping[Hashable, 'LinExpr']) -> 'LinExpr':
        # keys missing from the mapping stay as they are
        terms: Dict[Hashable, Number] = {}
        constant = self.constant
        for k, v in self.terms.items():
            replacement = mapping.get(k)
            if replacement is None:
                terms[k] = terms.get(k, 0) + v
                continue
            for rk, rv in replacement.terms.items():
                terms[rk] = terms.get(rk, 0) + v * rv
            constant += v * replacement.constant
        return LinExpr(terms, constant)

    def render(self, name: Callable[[Hashable], str] = str) -> str:
        parts = [f"{v} {name(k)}" for k, v in sorted(self.terms.items(), key=lambda kv: repr(kv[0]))]
        if self.constant or not parts:
            parts.append(str(self.constant))
        return ' + '.join(parts).replace('+ -', '- ')

    def __repr__(self) -> str:
        return f"LinExpr({self.render()})"


@dataclass(frozen=True)
class LinConstraint:
    lhs: LinExpr
    rel: str
    rhs: LinExpr

    def __post_init__(self):
        if self.rel not in RELATIONS:
            raise ValueError(f"Unknown relation: {self.rel}")

    @property
    def difference(self) -> LinExpr:
        # lhs - rhs, compared against 0 with rel
        return self.lhs - self.rhs

    def holds(self, assignment: Mapping[Hashable, Number]) -> bool:
        value = self.difference.evaluate(assignment)
        return {
            '<': value < 0, '<=': value <= 0, '=': value == 0, '>=': value >= 0, '>': value > 0,
        }[self.rel]

    def substitute(self, mapping: Mapping[Hashable, LinExpr]) -> 'LinConstraint':
        return LinConstraint(self.lhs.substitute(mapping), self.rel, self.rhs.substitute(mapping))

    def render(self, name: Callable[[Hashable], str] = str) -> str:
        return f"{self.lhs.render(name)} {self.rel} {self.rhs.render(name)}"


def compare(lhs: Union[LinExpr, Number], rel: str, rhs: Union[LinExpr, Number]) -> LinConstraint:
    as_expr = lambda x: x if isinstance(x, LinExpr) else LinExpr.const(x)
    return LinConstraint(as_expr(lhs), rel, as_expr(rhs))
