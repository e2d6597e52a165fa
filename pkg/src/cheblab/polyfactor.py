"""Degree patterns of X^p - a over F_q by distinct-degree factorization.

This is the independent cross-check for the residue-based class assignment:
the factorization type of X^p - a mod q determines the splitting behaviour
of q directly from polynomial arithmetic, with no reference to power-residue
formulas.  Polynomials are dense little-endian coefficient lists; degrees
never exceed p, so plain Python integer arithmetic is fast enough.
"""

from __future__ import annotations


def _trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def _polymod(f: list[int], g: list[int], q: int) -> list[int]:
    """f mod g over F_q; g must be monic."""
    f = [x % q for x in f]
    dg = len(g) - 1
    while len(f) - 1 >= dg and any(f):
        shift = len(f) - 1 - dg
        lead = f[-1]
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - lead * gc) % q
        _trim(f)
    return _trim(f)


def _polymulmod(f: list[int], h: list[int], g: list[int], q: int) -> list[int]:
    out = [0] * (len(f) + len(h) - 1)
    for i, fc in enumerate(f):
        if fc:
            for j, hc in enumerate(h):
                out[i + j] = (out[i + j] + fc * hc) % q
    return _polymod(out, g, q)


def _polypow_x(e: int, g: list[int], q: int) -> list[int]:
    """X^e mod g by square-and-multiply."""
    result = [1]
    base = _polymod([0, 1], g, q)
    while e:
        if e & 1:
            result = _polymulmod(result, base, g, q)
        base = _polymulmod(base, base, g, q)
        e >>= 1
    return result


def _polypowmod(f: list[int], e: int, g: list[int], q: int) -> list[int]:
    result = [1]
    base = list(f)
    while e:
        if e & 1:
            result = _polymulmod(result, base, g, q)
        base = _polymulmod(base, base, g, q)
        e >>= 1
    return result


def _monic(f: list[int], q: int) -> list[int]:
    inv = pow(f[-1], -1, q)
    return [x * inv % q for x in f]


def _polygcd(f: list[int], h: list[int], q: int) -> list[int]:
    f, h = list(f), list(h)
    while h:
        f, h = h, _polymod(f, _monic(h, q), q)
    return _monic(f, q) if f else f


def _polydiv(f: list[int], g: list[int], q: int) -> list[int]:
    """f // g for monic g that divides f exactly."""
    f = [x % q for x in f]
    dg = len(g) - 1
    quot = [0] * (len(f) - dg)
    while len(f) - 1 >= dg and any(f):
        shift = len(f) - 1 - dg
        lead = f[-1]
        quot[shift] = lead
        for i, gc in enumerate(g):
            f[shift + i] = (f[shift + i] - lead * gc) % q
        _trim(f)
    return quot


def degree_pattern(f: list[int], q: int) -> tuple[int, ...]:
    """Sorted irreducible-factor degrees of a squarefree monic f over F_q."""
    degrees: list[int] = []
    g = list(f)
    frob = None  # X^(q^r) mod g, maintained across rounds
    r = 0
    while len(g) - 1 > 0:
        r += 1
        if 2 * r > len(g) - 1:
            degrees.append(len(g) - 1)
            break
        if frob is None:
            frob = _polypow_x(q, g, q)
        else:
            frob = _polymod(frob, g, q)
            frob = _polypowmod(frob, q, g, q)
        # gcd(X^(q^r) - X, g) collects all factors of degree r
        diff = list(frob)
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % q
        common = _polygcd(diff, g, q)
        if len(common) - 1 > 0:
            degrees.extend([r] * ((len(common) - 1) // r))
            g = _polydiv(g, common, q)
            frob = _polymod(frob, g, q) if len(g) - 1 > 0 else None
    return tuple(sorted(degrees))


def xp_minus_a_degree_pattern(p: int, a: int, q: int) -> tuple[int, ...]:
    """Degree pattern of X^p - a over F_q for q not dividing a*p.

    The polynomial is automatically squarefree in that case: its derivative
    p X^(p-1) shares no root with it since X = 0 is not a root.
    """
    if q == p or a % q == 0:
        raise ValueError(f"q={q} divides a*p; the factorization type is not defined here")
    f = [(-a) % q] + [0] * (p - 1) + [1]
    return degree_pattern(f, q)
