import logging
import random
import time
from fractions import Fraction
from itertools import product

import pytest

from utils.ilp import ILPInstance, ILPVariable, UnboundedVariableError, dump_lp, solve_feasibility
from utils.linear import RELATIONS, LinExpr, compare

x, y, z = LinExpr.var(0), LinExpr.var(1), LinExpr.var(2)


def instance(uppers, *constraints):
    return ILPInstance(tuple(ILPVariable(i, u, 'xyzw'[i]) for i, u in enumerate(uppers)), tuple(constraints))


@pytest.mark.parametrize('enum_volume', [0, 64])
def test_single_equation(enum_volume):
    witness = solve_feasibility(instance([10], compare(2 * x, '=', 4)), enum_volume=enum_volume)
    assert witness is not None and witness[0] == 2


@pytest.mark.parametrize('enum_volume', [0, 64])
@pytest.mark.parametrize('constraints', [
    [compare(x + y, '=', 1), compare(x, '>=', 1), compare(y, '>=', 1)],
    [compare(2 * x, '=', 1)],
    [compare(2 * x + 4 * y, '=', 7)],
    [compare(3 * x + 5 * y, '=', 7)],
    [compare(x, '>', 3)],
])
def test_infeasible_instances(constraints, enum_volume):
    assert solve_feasibility(instance([3, 3], *constraints), enum_volume=enum_volume) is None


def test_strict_inequalities_are_tightened():
    witness = solve_feasibility(instance([2], compare(2 * x, '>', 3)), enum_volume=0)
    assert witness[0] == 2
    witness = solve_feasibility(instance([5], compare(3 * x, '<', 3)), enum_volume=0)
    assert witness[0] == 0


def test_fractional_coefficients():
    witness = solve_feasibility(instance([10, 10], compare(Fraction(1, 2) * x + Fraction(1, 3) * y, '=', 1),
                                         compare(y, '>=', 1)))
    assert (witness[0], witness[1]) == (0, 3)


def test_large_bounds_go_through_the_relaxation():
    big = 10 ** 6
    witness = solve_feasibility(instance([big, big], compare(x + y, '=', big), compare(x - y, '=', 2)))
    assert (witness[0], witness[1]) == (500001, 499999)
    assert solve_feasibility(instance([big, big], compare(x + y, '=', big), compare(x - y, '=', 3))) is None


@pytest.mark.parametrize('big', [10 ** 3, 10 ** 6, 10 ** 9])
def test_work_does_not_grow_with_the_bounds(big, caplog):
    caplog.set_level(logging.INFO, logger='utils.ilp')
    inst = instance([2 * big, 2 * big, 2 * big],
                    compare(x + y + z, '=', 2 * big + 1), compare(2 * x - 2 * y, '<=', 1), compare(3 * z, '<=', 2 * y + 1))
    started = time.perf_counter()
    witness = solve_feasibility(inst, enum_volume=0)
    assert time.perf_counter() - started < 1.0
    assert witness is not None
    assert all(c.holds(witness.assignment) for c in inst.constraints)
    assert any(r.getMessage().startswith('ILP factible') for r in caplog.records)


def test_constant_only_constraints():
    assert solve_feasibility(instance([1], compare(LinExpr.const(0), '<', 1))) is not None
    assert solve_feasibility(instance([1], compare(LinExpr.const(2), '<=', 1))) is None


def test_zero_upper_bounds_pin_variables():
    witness = solve_feasibility(instance([0, 4], compare(x + y, '>=', 3)))
    assert witness[0] == 0 and witness[1] >= 3


def test_unbounded_variables_are_rejected():
    with pytest.raises(UnboundedVariableError):
        solve_feasibility(ILPInstance((ILPVariable(0, None),), (compare(x, '>=', 1),)))


def test_undeclared_variables_are_rejected():
    with pytest.raises(ValueError):
        instance([3], compare(x + y, '=', 1))


def brute_force(uppers, constraints):
    for point in product(*(range(u + 1) for u in uppers)):
        assignment = dict(enumerate(point))
        if all(c.holds(assignment) for c in constraints):
            return True
    return False


def random_instance(rng):
    nv = rng.randint(1, 4)
    uppers = [rng.randint(0, 6) for _ in range(nv)]
    constraints = []
    for _ in range(rng.randint(1, 6)):
        lhs = LinExpr.sum(LinExpr.var(j, Fraction(rng.randint(-5, 5), rng.choice([1, 1, 2, 3]))) for j in range(nv))
        constraints.append(compare(lhs, rng.choice(RELATIONS), Fraction(rng.randint(-12, 16), rng.choice([1, 2]))))
    return uppers, constraints


def check_against_brute_force(rng, trials):
    for _ in range(trials):
        uppers, constraints = random_instance(rng)
        for enum_volume in (0, 64):
            witness = solve_feasibility(instance(uppers, *constraints), enum_volume=enum_volume)
            assert (witness is not None) == brute_force(uppers, constraints), (uppers, [c.render() for c in constraints])
            if witness is not None:
                assert all(c.holds(witness.assignment) for c in constraints)
                assert all(0 <= witness[j] <= u for j, u in enumerate(uppers))


def test_agrees_with_brute_force():
    check_against_brute_force(random.Random(3), 200)


@pytest.mark.slow
def test_agrees_with_brute_force_full():
    check_against_brute_force(random.Random(30), 1000)


def test_solver_is_deterministic():
    inst = instance([6, 6, 6], compare(x + y + z, '=', 7), compare(x - z, '>=', 1), compare(2 * y, '<=', 5))
    first = solve_feasibility(inst, enum_volume=0)
    assert first is not None
    for _ in range(5):
        assert solve_feasibility(inst, enum_volume=0) == first


def test_dump_lp_format():
    inst = instance([4, 2], compare(x + 2 * y, '>=', 3))
    text = dump_lp(inst)
    lines = text.splitlines()
    assert lines[0] == '\\ integer feasibility instance'
    assert lines[1] == 'subject to'
    assert lines[2].startswith(' c0: ')
    assert ' 0 <= x <= 4' in lines and ' 0 <= y <= 2' in lines
    assert lines[-1] == 'end'


def test_dump_dir_receives_the_instance(tmp_path):
    inst = instance([4], compare(x, '>=', 1))
    solve_feasibility(inst, dump_dir=str(tmp_path))
    (dumped,) = list(tmp_path.glob('*.lp'))
    assert dumped.read_text(encoding='utf-8') == dump_lp(inst)
