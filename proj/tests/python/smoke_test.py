"""Smoke tests for the python module. argv[1] is the directory holding the
built _biham extension, argv[2] the source python/ directory."""

import sys

sys.path.insert(0, sys.argv[1])
sys.path.insert(0, sys.argv[2])

import biham  # noqa: E402


def test_kernel_roundtrip():
    e = biham.parse("e^u + w^2/2")
    assert biham.render(e) == "exp(u) + (1/2)*w^2"
    d = biham.differentiate(e, "u")
    assert biham.render(d) == "exp(u)"
    s = biham.substitute(biham.parse("u^2"), {"u": biham.parse("v^(1/2)")})
    assert biham.render(s) == "v"
    assert biham.equal(biham.parse("u + u"), biham.parse("2*u"))


def test_evaluate():
    v = biham.evaluate(biham.parse("u^2"), {"u": 1.5})
    assert abs(v - 2.25) < 1e-12
    at = biham.evaluate(biham.parse("ArcTanh(x)"), {"x": 2.0})
    assert abs(at.imag) > 1.0  # principal branch leaves the real axis


def test_zero_test():
    z = biham.is_identically_zero(biham.parse("exp(log(u)) - u"))
    assert z["verdict"] == "zero"
    nz = biham.is_identically_zero(biham.parse("(2*u)^2 - 2*u"))
    assert nz["verdict"] == "nonzero"
    assert "u" in nz["witness"]
    again = biham.is_identically_zero(biham.parse("(2*u)^2 - 2*u"))
    assert nz["witness"] == again["witness"]


def test_example_pipeline():
    r = biham.example("kdv", m=1, k=1)
    assert r["status"] == "pass"
    assert r["exit_code"] == 0
    assert '"theorem2"' in r["json"]


def main():
    test_kernel_roundtrip()
    test_evaluate()
    test_zero_test()
    test_example_pipeline()
    print("python smoke tests passed")


if __name__ == "__main__":
    main()
