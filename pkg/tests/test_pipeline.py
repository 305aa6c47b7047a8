import pytest

from pdalift.chain import Annotation, Step, parse_chain
from pdalift.core import params, validate
from pdalift.errors import ParameterError
from pdalift.pipeline import StepMismatch, apply_step, build_base, run_chain

import formulas


@pytest.mark.parametrize("text,want", [
    ("2pda(4,1)", (4, 4, 1, 6, 2)),
    ("1pda(5,2)", (5, 5, 2, 15, 1)),
    ("i(4)", (4, 4, 3, 1, 4)),
    ("j(3)", (3, 3, 0, 9, 1)),
    ("g(4)", (4, 4, 1, 6, 2)),
    ("h(5)", (5, 5, 1, 10, 2)),
])
def test_bases(text, want):
    res = run_chain(text)
    assert res.params.as_tuple() == want
    assert res.trace == (res.params,)


def test_trace_follows_each_step():
    res = run_chain("2pda(2,1) > c2(2) @(8,8)_4^4 > c2(4) @(64,64)_32^8", validate_steps=True)
    assert [p.as_tuple() for p in res.trace] == [(2, 2, 1, 1, 2), (8, 8, 4, 8, 4),
                                                 (64, 64, 32, 256, 8)]
    assert validate(res.pda).valid


def test_rows_step_stacks_subfiles():
    res = run_chain("2pda(3,1) > rows(2)")
    assert res.params.as_tuple() == (3, 6, 2, 6, 2)


def test_basic_step_matches_formula():
    res = run_chain("2pda(4,1) > basic(3,1)")
    assert res.params.as_tuple() == formulas.basic((4, 4, 1, 6), 2, (3, 3, 1, 3), 2)


def test_nested2g_step_matches_recursion():
    res = run_chain("2pda(3,1) > nested2g(3)")
    n, z, s = formulas.nested2g(3, 3)[-1]
    assert res.params.as_tuple() == (n, n, z, s, 8)


def test_randbc_step_infers_family_size():
    res = run_chain("2pda(4,1) > randbc(3,2)")
    assert res.params.g == 3 and res.params.K == 12


def test_wrong_annotation_names_the_step():
    with pytest.raises(StepMismatch) as exc:
        run_chain("2pda(2,1) > c2(2) @(8,8)_4^4 > c2(4) @(64,64)_31^8")
    assert exc.value.index == 2
    assert exc.value.expected == Annotation(64, 64, 31, 8)
    assert exc.value.actual.Z == 32


def test_annotation_without_gain_ignores_gain():
    assert run_chain("2pda(4,1) > c2(2) @(16,16)_6").params.g == 4


def test_step_parameter_errors_propagate():
    with pytest.raises(ParameterError):
        run_chain("2pda(3,2)")
    with pytest.raises(ParameterError):
        run_chain("2pda(4,1) > c1(3)")
    with pytest.raises(ParameterError):
        run_chain("1pda(4,1) > lift2r(2)")


def test_build_base_and_apply_step_directly():
    p = build_base(Step("2pda", (4, 1)))
    q = apply_step(p, parse_chain("2pda(4,1) > bw2(4,2)").steps[0])
    assert params(q).as_tuple() == formulas.general_regular((4, 4, 1, 6), *formulas.FAMILY["bw2"](4, 2))
