"""Exact arithmetic in small Galois fields via dense lookup tables.

Elements of GF(p^k) are integer codes 0..q-1: the code c0 + c1*p + c2*p^2 + ...
stands for the polynomial c0 + c1*x + ... reduced modulo a fixed monic
primitive polynomial.  Code 0 is zero, code 1 is one, and (for k >= 2) code p
is the class of x, a primitive element.

All operation tables are dense numpy arrays, since the verification engines
downstream perform on the order of 1e8 field operations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# One fixed monic primitive polynomial per supported order, as coefficient
# tuples (c0, c1, ..., c_{k-1}, 1), low degree first.  Lexicographically
# smallest primitive choice per order; reports print these so that element
# codes are reproducible bit for bit.
MODULI = {
    2: (1, 1),
    3: (1, 1),
    4: (1, 1, 1),
    5: (2, 1),
    7: (2, 1),
    8: (1, 0, 1, 1),
    9: (2, 1, 1),
    11: (3, 1),
    13: (2, 1),
    16: (1, 0, 0, 1, 1),
    25: (2, 1, 1),
    27: (1, 0, 2, 1),
    32: (1, 0, 0, 1, 0, 1),
    49: (3, 1, 1),
    64: (1, 0, 0, 0, 0, 1, 1),
    81: (2, 0, 0, 1, 1),
    121: (2, 4, 1),
    125: (2, 0, 1, 1),
    128: (1, 0, 0, 0, 0, 0, 1, 1),
    169: (2, 1, 1),
    243: (1, 0, 0, 0, 2, 1),
    256: (1, 0, 0, 0, 1, 1, 1, 0, 1),
}

MAX_ORDER = 256


class FieldError(ValueError):
    pass


def _prime_power(q):
    """Return (p, k) with q = p^k, or None if q is not a prime power."""
    if q < 2:
        return None
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            return (p, k) if m == 1 else None
    return None


def _digits(code, p, k):
    out = []
    for _ in range(k):
        out.append(code % p)
        code //= p
    return out


def _code(digits, p):
    c = 0
    for d in reversed(digits):
        c = c * p + d
    return c


def _polmulmod(a, b, mod, p):
    """Product of coefficient lists a, b over GF(p), reduced mod monic `mod`."""
    res = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    d = len(mod) - 1
    for i in range(len(res) - 1, d - 1, -1):
        c = res[i]
        if c:
            for j in range(d + 1):
                res[i - d + j] = (res[i - d + j] - c * mod[j]) % p
    res = res[:d]
    res += [0] * (d - len(res))
    return res


@dataclass(frozen=True)
class FieldTable:
    """GF(q) with dense operation tables; immutable and freely shareable."""

    q: int
    p: int
    k: int
    modulus: tuple
    add: np.ndarray = field(repr=False)
    mul: np.ndarray = field(repr=False)
    neg: np.ndarray = field(repr=False)
    inv: np.ndarray = field(repr=False)  # inv[0] = 0 by convention
    exp: np.ndarray = field(repr=False)  # exp[i] = g^i, g the primitive element
    log: np.ndarray = field(repr=False)  # log[exp[i]] = i for nonzero codes

    @property
    def primitive(self):
        """Code of the fixed primitive element (x for k >= 2)."""
        return int(self.exp[1])

    def element_pow(self, x, e):
        if x == 0:
            return 0 if e else 1
        return int(self.exp[(int(self.log[x]) * e) % (self.q - 1)])

    def pow(self, x, e):
        return self.element_pow(x, e)

    def sub(self, a, b):
        return int(self.add[a, self.neg[b]])

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by field zero")
        return int(self.mul[a, self.inv[b]])


def build_field(q):
    """Build GF(q) tables for a prime power q <= 256."""
    pk = _prime_power(q)
    if pk is None:
        raise FieldError(f"q={q} is not a prime power")
    if q > MAX_ORDER:
        raise FieldError(f"q={q} exceeds the supported bound {MAX_ORDER}")
    p, k = pk
    modulus = MODULI[q]

    dig = [_digits(c, p, k) for c in range(q)]
    add = np.zeros((q, q), dtype=np.int16)
    mul = np.zeros((q, q), dtype=np.int16)
    for a in range(q):
        for b in range(a, q):
            s = _code([(x + y) % p for x, y in zip(dig[a], dig[b])], p)
            add[a, b] = add[b, a] = s
            m = _code(_polmulmod(dig[a], dig[b], modulus, p), p)
            mul[a, b] = mul[b, a] = m
    neg = np.array([_code([(-x) % p for x in dig[a]], p) for a in range(q)],
                   dtype=np.int16)

    # primitive element: class of x for k >= 2, else the reduced root -c0
    g = p if k >= 2 else (-modulus[0]) % p
    exp = np.zeros(q - 1, dtype=np.int16)
    log = np.zeros(q, dtype=np.int64)
    acc = 1
    for i in range(q - 1):
        exp[i] = acc
        log[acc] = i
        acc = int(mul[acc, g])
    if acc != 1 or len(set(exp.tolist())) != q - 1:
        raise FieldError(f"shipped modulus for q={q} is not primitive")

    inv = np.zeros(q, dtype=np.int16)
    for a in range(1, q):
        inv[a] = exp[(q - 1 - log[a]) % (q - 1)]

    for arr in (add, mul, neg, inv, exp, log):
        arr.setflags(write=False)
    return FieldTable(q=q, p=p, k=k, modulus=modulus, add=add, mul=mul,
                      neg=neg, inv=inv, exp=exp, log=log)


@dataclass(frozen=True)
class ExtensionPair:
    """GF(q) inside GF(q^2), with the Frobenius x -> x^q and derived maps."""

    base: FieldTable
    ext: FieldTable
    embed: np.ndarray = field(repr=False)      # base code -> ext code
    unembed: dict = field(repr=False)          # ext code of subfield -> base code
    frob: np.ndarray = field(repr=False)       # x -> x^q on ext codes
    trace: np.ndarray = field(repr=False)      # x + x^q, as ext codes
    norm: np.ndarray = field(repr=False)       # x^(q+1), as ext codes

    @property
    def q(self):
        return self.base.q

    def trace_base(self, x):
        return self.unembed[int(self.trace[x])]

    def norm_base(self, x):
        return self.unembed[int(self.norm[x])]


def build_extension(q):
    """Build the pair GF(q) < GF(q^2) with a fixed, verified embedding."""
    base = build_field(q)
    if q * q > MAX_ORDER:
        raise FieldError(f"q^2={q * q} exceeds the supported bound {MAX_ORDER}")
    ext = build_field(q * q)
    q2 = q * q

    frob = np.array([ext.element_pow(x, q) for x in range(q2)], dtype=np.int16)
    fixed = [x for x in range(q2) if frob[x] == x]
    if len(fixed) != q:
        raise FieldError(f"fixed field of x -> x^{q} has wrong size")

    # image of the base primitive element: the smallest fixed-field root of
    # the base modulus, evaluated with prime-subfield coefficients
    def eval_base_modulus(x):
        acc = 0
        for c in reversed(base.modulus):
            acc = ext.add[ext.mul[acc, x], c]
        return int(acc)

    roots = [x for x in fixed if eval_base_modulus(x) == 0]
    if not roots:
        raise FieldError("base modulus has no root in the fixed subfield")
    beta = min(roots)

    embed = np.zeros(q, dtype=np.int16)
    for c in range(q):
        acc = 0
        for d in reversed(_digits(c, base.p, base.k)):
            acc = ext.add[ext.mul[acc, beta], d]
        embed[c] = acc
    if len(set(embed.tolist())) != q or sorted(embed.tolist()) != sorted(fixed):
        raise FieldError("embedding does not hit the Frobenius-fixed subfield")
    unembed = {int(e): c for c, e in enumerate(embed)}

    trace = np.array([ext.add[x, frob[x]] for x in range(q2)], dtype=np.int16)
    norm = np.array([ext.mul[x, frob[x]] for x in range(q2)], dtype=np.int16)
    for arr in (frob, embed, trace, norm):
        arr.setflags(write=False)
    return ExtensionPair(base=base, ext=ext, embed=embed, unembed=unembed,
                         frob=frob, trace=trace, norm=norm)


def frob_trace_norm(pair, x):
    """(x^q, x + x^q, x^(q+1)) for an element code x of the extension field."""
    if not 0 <= x < pair.ext.q:
        raise FieldError(f"element code {x} out of range for GF({pair.ext.q})")
    return int(pair.frob[x]), int(pair.trace[x]), int(pair.norm[x])
