"""Smoke test for the pvk extension module.

Build and copy the module next to this file first:

    cargo build -p pvk-python --release
    cp target/release/libpvk.so python/pvk.so
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pvk  # noqa: E402


def one(exps):
    return [("1", list(exps))]


def main():
    sl2 = pvk.LieAlgebra.preset("sl2")
    assert sl2.dim == 3 and sl2.is_semisimple()
    assert sl2.killing_determinant() == "-128"
    assert sl2.ce_dims("adjoint", [0, 1, 2, 3]) == [0, 0, 0, 0]

    pi = pvk.PoissonStructure.lie_poisson(sl2)
    assert pi.is_linear() and pi.nvars == 3
    # {h, e} = 2e
    assert pi.bracket(one([1, 0, 0]), one([0, 1, 0])) == [("2", [0, 1, 0])]

    std = pvk.Bundle.from_representation(pi, "standard")
    assert std.rank == 2 and std.is_flat()

    x = [("1", [1, 0, 0])]
    zero = []
    identity = [("1", [0, 0, 0])]
    sheared = std.gauge([[identity, x], [zero, identity]])
    assert sheared.is_flat()
    assert sheared.components()[0][0][1] == [("-2", [1, 0, 0])]

    phi, xi0 = sheared.normalize(4)
    assert xi0[0] == [["1", "0"], ["0", "-1"]]
    assert phi[0][1] == [("-1", [1, 0, 0])]
    assert pvk.trace_word_invariants(xi0, 3) == pvk.trace_word_invariants(
        [[["1", "0"], ["0", "-1"]], [["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]], 3
    )

    aff1 = pvk.PoissonStructure.lie_poisson(pvk.LieAlgebra.preset("aff1"))
    assert aff1.modular_class() == [[("1", [0, 0])], []]
    assert aff1.cohomology_dims(2, [0, 1]) == [1, 1]

    ab = pvk.PoissonStructure.lie_poisson(pvk.LieAlgebra.preset("abelian:2"))
    y = [("1", [0, 1])]
    xi = pvk.Bundle.from_components(ab, [[[[], y], [[], []]], [[[], []], [[], []]]])
    try:
        xi.normalize(2)
    except pvk.PvkError as e:
        assert "semisimple" in str(e)
    else:
        raise AssertionError("semisimplicity gate did not fire")
    try:
        xi.normalize(2, force=True)
    except pvk.ObstructionError as e:
        degree, cocycle = e.args
        assert degree == 1 and cocycle[0][0][1] == y
    else:
        raise AssertionError("expected an obstruction")

    try:
        pvk.LieAlgebra.from_brackets(3, [(0, 1, [(1, "2")]), (0, 2, [(2, "2")]), (1, 2, [(0, "1")])])
    except pvk.PvkError:
        pass
    else:
        raise AssertionError("Jacobi violation accepted")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
