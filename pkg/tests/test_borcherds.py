from fractions import Fraction

import pytest

from qcong.borcherds import (
    EigenData,
    NonDivisible,
    TwistParams,
    ZeroNormalizer,
    b_from_c,
    c_from_b,
    exact_c1,
    phi_raw_numeric,
    phi_star,
    predict_c,
    predict_coefficient,
    predict_f,
    predict_omega,
)
from qcong.hecke import CongruenceSetting
from qcong.mocktheta import c_series
from qcong.series import EXACT, Ring


def test_twist_params_validation():
    TwistParams(-8, 4)
    TwistParams(-23, 1)
    TwistParams(-20, 2)
    with pytest.raises(ValueError):
        TwistParams(-8, 3)
    with pytest.raises(ValueError):
        TwistParams(-12, 6)  # not fundamental
    with pytest.raises(ValueError):
        TwistParams(8, 4)  # positive


def test_b_from_c_examples(tables_exact):
    c = c_series(-8, 4, 8, EXACT, tables_exact)
    assert b_from_c(c, 1, -8, EXACT) == 1
    assert b_from_c(c, 2, -8, EXACT) == -6
    assert b_from_c(c, 3, -8, EXACT) == 1


def test_c_from_b_examples(tables_exact):
    c = c_series(-8, 4, 8, EXACT, tables_exact)
    b = [0] + [b_from_c(c, n, -8, EXACT) for n in range(1, 9)]
    assert c_from_b(b, 1, -8, c[1], EXACT) == c[1]
    assert c_from_b(b, 2, -8, c[1], EXACT) == 12


def test_round_trip_small(tables_exact):
    for delta, r in ((-8, 4), (-23, 1)):
        c = c_series(delta, r, 60, EXACT, tables_exact)
        b = [0] * 61
        for n in range(1, 61):
            b[n] = b_from_c(c, n, delta, EXACT)
        for n in range(1, 61):
            assert c_from_b(b, n, delta, c[1], EXACT) == c[n], (delta, n)


def test_round_trip_modular(tables_mod23):
    # c_from_b divides by n, so n must be invertible mod 23
    ring = Ring(23)
    c = c_series(-8, 4, 40, ring, tables_mod23)
    b = [0] + [b_from_c(c, n, -8, ring) for n in range(1, 41)]
    for n in range(1, 41):
        if n % 23 == 0:
            continue
        assert c_from_b(b, n, -8, c[1], ring) == c[n]


def test_non_divisible():
    with pytest.raises(NonDivisible):
        c_from_b([0, 1, 0], 2, -23, 1, EXACT)


def test_phi_star_values(tables_exact, tables_mod23):
    phi = phi_star(TwistParams(-8, 4), 3, Ring(23), tables_mod23)
    assert phi.series.coeffs[1:] == [1, 17, 1]
    phi23 = phi_star(TwistParams(-23, 1), 1, EXACT, tables_exact)
    assert phi23.series.coeffs[1] == 1
    assert phi23.c1 == 1
    assert exact_c1(TwistParams(-8, 4)) == -4


def test_phi_star_zero_normalizer(tables_exact, monkeypatch):
    import qcong.borcherds as bmod

    monkeypatch.setattr(bmod, "exact_c1", lambda params: 0)
    with pytest.raises(ZeroNormalizer):
        phi_star(TwistParams(-8, 4), 3, EXACT, tables_exact)


def test_phi_raw_numeric_spot_values():
    params = TwistParams(-8, 4)
    vals = phi_raw_numeric(params, 3)
    assert abs(complex(vals[1]) - 1) < 1e-6
    assert abs(complex(vals[2]) - (-6)) < 1e-6
    assert abs(complex(vals[3]) - 1) < 1e-6


@pytest.mark.parametrize("delta,r", [(-8, 4), (-23, 1)])
def test_oracle_equivalence_small(delta, r, tables_exact):
    params = TwistParams(delta, r)
    phi = phi_star(params, 40, EXACT, tables_exact)
    oracle = phi_raw_numeric(params, 40, tables_exact)
    tol = Fraction(1, 10 ** 6)
    for n in range(1, 41):
        assert abs(oracle[n].imag) < tol
        assert round(oracle[n].real) == phi.series.coeffs[n]
        assert abs(oracle[n].real - phi.series.coeffs[n]) < tol


def test_eigen_data_closed_form():
    setting = CongruenceSetting(23, 1, 2)
    e = EigenData(setting, 5, 0)
    m = 23
    k = setting.k
    for j in range(0, 17):
        if j % 2:
            assert e.b_power(j) == 0
        else:
            assert e.b_power(j) == pow(-pow(5, k - 1, m), j // 2, m) % m


def test_predict_c_consistency():
    # the prediction at p^M equals direct substitution of the power rule
    setting = CongruenceSetting(23, 1, 2)
    params = TwistParams(-8, 4)
    from qcong.ntheory import kronecker, mod_inverse

    for lam in (0, 2, 7):
        e = EigenData(setting, 5, lam)
        for M in range(1, 9):
            got = predict_c(5 ** M, e, params, -4)
            chi = kronecker(-8, 5)
            direct = (-4) * mod_inverse(5 ** M, 23) * (
                e.b_power(M) - e.b_power(M - 1) * chi
            ) % 23
            assert got == direct % 23


def test_predict_c_validation():
    setting = CongruenceSetting(23, 1, 2)
    params = TwistParams(-8, 4)
    e = EigenData(setting, 5, 0)
    assert predict_c(1, e, params, -4) == -4 % 23
    with pytest.raises(ValueError):
        predict_c(10, e, params, -4)  # not coprime to 6
    from qcong.borcherds import UncoveredPrime

    with pytest.raises(UncoveredPrime):
        predict_c(7, e, params, -4)


def test_predict_omega_table():
    setting = CongruenceSetting(23, 1, 2)
    e = EigenData(setting, 5, 0)
    assert predict_omega(5, 1, e) == (16, 9)
    assert predict_omega(5, 2, e) == (416, 9)
    assert predict_omega(5, 3, e) == (10416, 12)
    assert predict_omega(5, 4, e) == (260416, 12)


def test_predict_f_index():
    setting = CongruenceSetting(5, 1, 2)
    e = EigenData(setting, 7, 0)
    idx, _ = predict_f(7, 1, e)
    assert idx == (23 * 49 + 1) // 24
    setting23 = CongruenceSetting(23, 1, 2)
    e5 = EigenData(setting23, 5, 0)
    assert predict_f(5, 1, e5)[0] == 24
    with pytest.raises(ValueError):
        predict_f(23, 1, e5)


def test_predict_f_odd_case_sign():
    # at lambda = 0 and odd M the residue carries (delta/p) and the
    # dictionary sign for key p^M mod 12
    from qcong.ntheory import kronecker, mod_inverse
    from qcong.mocktheta import CPLUS_DISPATCH

    setting = CongruenceSetting(23, 1, 2)
    for p in (5, 7, 11, 13):
        e = EigenData(setting, p, 0)
        idx, res = predict_f(p, 1, e)
        _, sign = CPLUS_DISPATCH[p % 12]
        expect = sign * mod_inverse(p, 23) * (-e.b_power(0)) * kronecker(-23, p) % 23
        assert res == expect


def test_predict_coefficient_kind(tables_exact):
    setting = CongruenceSetting(23, 1, 2)
    e = EigenData(setting, 5, 0)
    kind, idx, _ = predict_coefficient(TwistParams(-8, 4), 5, 1, e)
    assert (kind, idx) == ("omega", 16)
    kind, idx, _ = predict_coefficient(TwistParams(-23, 1), 5, 1, e)
    assert (kind, idx) == ("f", 24)
