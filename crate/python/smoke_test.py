"""Smoke test for the Python bindings.

Build and install first:  pip install ./crates/python   (or maturin develop)
"""

import json
import math

import zvp

LN2 = math.log(2.0)


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol


def main():
    d = zvp.AlmostMetric([[0.0, 1.0], [2.0, 0.0]])
    assert d.n == 2 and not d.is_symmetric()
    assert not zvp.validate_almost_metric([[0, 1, 5], [1, 0, 1], [5, 1, 0]]).passed

    f = zvp.NormalFunction.inv1p()
    assert close(f.integral(2.0), math.log(3.0))
    assert close(f.inverse_integral(math.log(3.0)), 2.0)
    assert f.check_properties(count=2000).passed

    g = zvp.weight_from_anchor(d, 0)
    assert g == [0.0, 1.0]
    e = zvp.zhong_metric(d, g, f)
    assert close(e.get(0, 1), LN2) and close(e.get(1, 0), LN2)

    phi = [2.0, 0.0]
    evp = zvp.evp_point(0, d, phi)
    assert evp.v == 1 and evp.chain == [0, 1] and evp.holds()

    cert = zvp.zvp_point(0, d, phi, f, g)
    slacks = dict(cert.slacks())
    assert cert.v == 1 and cert.holds()
    assert close(slacks["sandwich-lower"], LN2 - 0.5)
    assert json.loads(cert.to_json())["theorem"] == "zvp"

    try:
        zvp.zvp_local(0, 3.0, d, phi, f, g)
        raise AssertionError("premise should fail at rho = 3")
    except zvp.PremiseError:
        pass

    F = [[0.0, -2.0], [2.0, 0.0]]
    eq = zvp.equilibrium_via_e(0, F, d, d)
    bkp = zvp.bkp_point(0, F, d)
    assert eq.v == bkp.v == 1 and eq.slacks() == bkp.slacks()
    assert zvp.equilibrium_zhong(0, F, d, f, g).holds()

    inf = float("inf")
    r = zvp.AlmostMetric.random(5, 6)
    c = zvp.evp_point(0, r, [3.0, inf, 1.0, 4.0, inf, 0.5])
    assert c.holds()

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
