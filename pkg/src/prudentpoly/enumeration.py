"""Exact counting sequences for prudent self-avoiding polygons by area.

Routes implemented:

* 2-sided: closed form 2q/(1-2q) + 2q/(1-q), i.e. counts 2^n + 2.
* 3-sided, ``functional``: solve W(q,u) = F(q,u) + G(q,u) W(q,qu) for the
  area-width series of counter-clockwise polygons ending one step west of
  the origin, by iterating the substitution; then 2*(W(q,1) + q/(1-q) +
  q/(1-2q)).
* 3-sided, ``theorem``: the explicit sum whose term m carries the product
  prod_{k=1}^{m-1} (1-q-q^k+q^{k+1}-q^{k+2})/(1-q-q^{k+1}); evaluated with an
  incremental running term (one sparse multiply and two sparse divisions per
  step), all in exact integers.
* 4-sided: joint q-adic fixed point of the three trivariate functional
  equations coupling the row/column-addition classes X, Y, Z; returns
  8*(X+Y+Z) at u=v=1.
* 3-sided float mode: the theorem route in the scaled variable x = 2q on
  fixed-point mantissas, for orders where exact integers get too wide.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import _intpoly
from .series import FloatSeries1, Series1, Series2, Series3, expand_rational


@dataclass(frozen=True)
class CountTable:
    """Counts PA_n for n = 1..N of k-sided prudent polygons by area."""

    k: int
    counts: tuple[int, ...]
    method: str

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if self.k not in (2, 3, 4):
            raise ValueError("sidedness k must be 2, 3 or 4")
        if any(c < 0 for c in self.counts):
            raise ValueError("polygon counts must be nonnegative")
        if self.k == 3 and any(c % 2 for c in self.counts):
            raise ValueError("3-sided counts must be even (reflection symmetry)")
        if self.k == 4 and any(c % 8 for c in self.counts):
            raise ValueError("4-sided counts must be divisible by 8")

    @property
    def max_area(self) -> int:
        return len(self.counts)

    def count(self, n: int) -> int:
        if not 1 <= n <= self.max_area:
            raise ValueError(f"area {n} outside 1..{self.max_area}")
        return self.counts[n - 1]


def bargraph_series(order: int, with_width: bool = False):
    """Area (or area-width) generating function of bargraphs.

    The bivariate series solves B = qu/(1-q) + qu/(1-q) B, built here by
    iterating that equation (column by column) until the update vanishes.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if not with_width:
        return expand_rational((0, 1), (1, -2), order)
    n = order
    # delta_1 = qu/(1-q); delta_{s+1} = qu/(1-q) * delta_s, one more column.
    delta = [[0] * (n + 1)]
    first = [0] * (n + 1)
    for m in range(1, n + 1):
        first[m] = 1
    delta.append(first)
    total = [row[:] for row in delta]
    while True:
        nxt = [[0] * (n + 1)]
        alive = False
        for row in delta:
            nr = [0] * (n + 1)
            nr[1:] = row[:n]                      # * q (and * u via index shift)
            for i in range(1, n + 1):             # / (1-q)
                nr[i] += nr[i - 1]
            if any(nr):
                alive = True
            nxt.append(nr)
        if not alive:
            break
        delta = nxt
        while len(total) < len(delta):
            total.append([0] * (n + 1))
        for i, row in enumerate(delta):
            trow = total[i]
            for idx, c in enumerate(row):
                if c:
                    trow[idx] += c
    return Series2(n, total)


def pa2_series(order: int) -> CountTable:
    """2-sided counts: coefficients of 2q/(1-2q) + 2q/(1-q), i.e. 2^n + 2."""
    if order < 1:
        raise ValueError("order must be >= 1")
    s = expand_rational((0, 2), (1, -2), order) + expand_rational((0, 2), (1, -1), order)
    return CountTable(2, s.coeffs[1:], "closed-form")


def _w_blocks(order: int) -> list[list[int]]:
    """Solve W = F + G W(q,qu) by substitution iteration, as u-degree blocks.

    Both F and G factor through 1/(1-q-qu), so multiplying by G is one sparse
    numerator pass plus the prefix recurrence Y_k = (A_k + q Y_{k-1})/(1-q)
    per u-block.  Iteration m contributes only at q-valuation >= 2m+1, which
    is checked and used as the stopping rule.
    """
    n = order

    def div_1mq(c):
        for i in range(1, n + 1):
            c[i] += c[i - 1]

    def div_1m2q(c):
        for i in range(1, n + 1):
            c[i] += 2 * c[i - 1]

    # F blocks: F_0 = 0, F_1 = q(1-q)^2/((1-2q)(1-q)), F_k = q/(1-q) F_{k-1}.
    s0 = _intpoly.expand_rational([0, 1, -2, 1], [1, -2], n)  # q(1-q)^2/(1-2q)
    blk = s0[:]
    div_1mq(blk)
    f_blocks = [[0] * (n + 1), blk]
    while True:
        nb = [0] + f_blocks[-1][:n]
        div_1mq(nb)
        if not any(nb):
            break
        f_blocks.append(nb)

    total = [row[:] for row in f_blocks]
    delta = f_blocks
    m = 0
    while True:
        m += 1
        if 2 * m + 1 > n:
            break
        # substitute u -> qu: block k shifts by k in q
        sub = []
        for k, row in enumerate(delta):
            if k > n:
                break
            sub.append([0] * k + row[:n + 1 - k])
        # A_k = s1*D_k + s2*D_{k-1} with s1 = (-q+q^2)/(1-2q),
        # s2 = (q-q^2+q^3)/(1-2q); numerators applied sparsely.
        blocks = []
        for k in range(len(sub) + 1):
            acc = [0] * (n + 1)
            if k < len(sub):
                dk = sub[k]
                for i in range(n, 0, -1):
                    v = -dk[i - 1]
                    if i >= 2:
                        v += dk[i - 2]
                    acc[i] += v
            if k >= 1:
                dk = sub[k - 1]
                for i in range(n, 0, -1):
                    v = dk[i - 1]
                    if i >= 2:
                        v -= dk[i - 2]
                    if i >= 3:
                        v += dk[i - 3]
                    acc[i] += v
            div_1m2q(acc)
            blocks.append(acc)
        # multiply by 1/(1-q-qu): prefix recurrence over u-degree
        prev = None
        out = []
        for ak in blocks:
            cur = ak[:]
            if prev is not None:
                for i in range(1, n + 1):
                    cur[i] += prev[i - 1]
            div_1mq(cur)
            out.append(cur)
            prev = cur
        while out and not any(out[-1]):
            out.pop()
        delta = out
        vals = [v for v in (_intpoly.valuation(r) for r in delta) if v is not None]
        if not vals:
            break
        if min(vals) < 2 * m + 1:
            raise AssertionError(
                f"iteration {m} contributed below q-valuation {2 * m + 1}")
        while len(total) < len(delta):
            total.append([0] * (n + 1))
        for k, row in enumerate(delta):
            trow = total[k]
            for idx, c in enumerate(row):
                if c:
                    trow[idx] += c
    return total


def w_series(order: int) -> Series2:
    """Area-width series of 3-sided ccw polygons ending at (-1, 0)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return Series2(order, _w_blocks(order))


def _pa3_theorem_coeffs(order: int) -> list[int]:
    """Exact theorem-route coefficients of the 3-sided area series."""
    n = order
    term = [0] * (n + 1)
    if n >= 2:
        term[2] = -1
        for i in range(3, n + 1):       # / (1-2q)
            term[i] += 2 * term[i - 1]
        for i in range(3, n + 1):       # / (1-q-q^2)
            term[i] += term[i - 1] + term[i - 2]
    total = term[:]
    m = 1
    while 2 * (m + 1) <= n:
        # term_{m+1} = term_m * (-q^2)(1-q-q^m+q^{m+1}-q^{m+2})
        #            / ((1-2q)(1-q-q^{m+2}))
        nxt = [0] * (n + 1)
        for i in range(n, 1, -1):
            v = term[i - 2]
            if i - 3 >= 0:
                v -= term[i - 3]
            if i - 2 - m >= 0:
                v -= term[i - 2 - m]
            if i - 3 - m >= 0:
                v += term[i - 3 - m]
            if i - 4 - m >= 0:
                v -= term[i - 4 - m]
            nxt[i] = -v
        for i in range(1, n + 1):
            nxt[i] += 2 * nxt[i - 1]
        md = m + 2
        for i in range(1, n + 1):
            v = nxt[i - 1]
            if i - md >= 0:
                v += nxt[i - md]
            nxt[i] += v
        term = nxt
        m += 1
        for i in range(2 * m, n + 1):
            total[i] += term[i]
    # prefactor -2q^3(1-q)^2/(1-2q)^2
    out = [0] * (n + 1)
    for i in range(n, 2, -1):
        v = total[i - 3]
        if i - 4 >= 0:
            v -= 2 * total[i - 4]
        if i - 5 >= 0:
            v += total[i - 5]
        out[i] = -2 * v
    for _ in range(2):
        for i in range(1, n + 1):
            out[i] += 2 * out[i - 1]
    # + 2q(3-10q+9q^2-q^3)/((1-2q)^2(1-q))
    rat = _intpoly.expand_rational([0, 6, -20, 18, -2], [1, -5, 8, -4], n)
    return [out[i] + rat[i] for i in range(n + 1)]


def pa3_series(order: int, method: str = "theorem") -> CountTable:
    """3-sided counts via the explicit sum or the functional equation."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if method == "theorem":
        coeffs = _pa3_theorem_coeffs(order)
    elif method == "functional":
        w1 = w_series(order).eval_catalytic(1)
        extra = expand_rational((0, 1), (1, -1), order) + \
            expand_rational((0, 1), (1, -2), order)
        coeffs = [2 * (w1.coeffs[i] + extra.coeffs[i]) for i in range(order + 1)]
    else:
        raise ValueError("method must be 'theorem' or 'functional'")
    return CountTable(3, coeffs[1:], method)


# ---------------------------------------------------------------------------
# 4-sided: the trivariate system.
#
# X: row of length <= width added on top; Y: column of height <= height added
# on the right (seeded by the unit square), plus the length-(width+1) row
# construction; Z: row added along the bottom plus the height-(height+1)
# column construction.  In Y the variables are (u=height, v=width), in Z the
# width is carried as u = width-1, which is where the asymmetric factors come
# from.  The solution is the q-adic fixed point, iterated on updates.
# ---------------------------------------------------------------------------


def _t3_subst_u(s, n):
    out = {}
    for (i, j), row in s.items():
        if i > n:
            continue
        nr = row[:n + 1 - i]
        if any(nr):
            out[(i, j)] = [0] * i + nr
    return out


def _t3_subst_v(s, n):
    out = {}
    for (i, j), row in s.items():
        if j > n:
            continue
        nr = row[:n + 1 - j]
        if any(nr):
            out[(i, j)] = [0] * j + nr
    return out


def _t3_swap(s):
    return {(j, i): row for (i, j), row in s.items()}


def _t3_mono(s, n, dq=0, du=0, dv=0):
    out = {}
    for (i, j), row in s.items():
        ni, nj = i + du, j + dv
        if ni > n or nj > n:
            continue
        nr = [0] * dq + row[:n + 1 - dq]
        if any(nr):
            out[(ni, nj)] = nr + [0] * (n + 1 - len(nr))
    return out


def _t3_sub(a, b, n):
    out = {k: r[:] for k, r in a.items()}
    for key, row in b.items():
        cur = out.get(key)
        if cur is None:
            out[key] = [-c for c in row]
        else:
            for idx in range(n + 1):
                if row[idx]:
                    cur[idx] -= row[idx]
    return out


def _t3_add_into(dst, src, n):
    for key, row in src.items():
        cur = dst.get(key)
        if cur is None:
            dst[key] = row[:]
        else:
            for idx in range(n + 1):
                if row[idx]:
                    cur[idx] += row[idx]


def _t3_div_1mq(s, n):
    for row in s.values():
        for i in range(1, n + 1):
            row[i] += row[i - 1]
    return s


def _t3_clean(s):
    return {k: r for k, r in s.items() if any(r)}


def _pa4_linear_map(x, y, z, n):
    """One application of the linear part of the X/Y/Z system."""
    ys = _t3_swap(y)
    zs = _t3_swap(z)
    xs = _t3_swap(x)

    xn: dict = {}
    _t3_add_into(xn, _t3_mono(_t3_div_1mq(
        _t3_sub(x, _t3_subst_u(x, n), n), n), n, dq=1, dv=1), n)
    _t3_add_into(xn, _t3_mono(_t3_div_1mq(
        _t3_sub(ys, _t3_subst_u(ys, n), n), n), n, dq=1, dv=1), n)
    z_qu = _t3_mono(_t3_subst_u(z, n), n, dq=1)
    _t3_add_into(xn, _t3_mono(_t3_div_1mq(
        _t3_sub(z, z_qu, n), n), n, dq=1, du=1, dv=1), n)

    yn: dict = {}
    _t3_add_into(yn, _t3_mono(_t3_div_1mq(
        _t3_sub(y, _t3_subst_u(y, n), n), n), n, dq=1, dv=1), n)
    _t3_add_into(yn, _t3_mono(_t3_div_1mq(
        _t3_sub(zs, _t3_subst_u(zs, n), n), n), n, dq=1, dv=2), n)
    inner: dict = {}
    _t3_add_into(inner, _t3_subst_v(xs, n), n)                       # X(q,qv,u)
    _t3_add_into(inner, _t3_subst_v(y, n), n)                        # Y(q,u,qv)
    _t3_add_into(inner, _t3_mono(_t3_subst_v(zs, n), n, dq=1, dv=1), n)  # qv Z(q,qv,u)
    _t3_add_into(yn, _t3_mono(inner, n, dq=1, du=1, dv=1), n)

    zn: dict = {}
    _t3_add_into(zn, _t3_mono(_t3_div_1mq(
        _t3_sub(z, _t3_subst_u(z, n), n), n), n, dq=1, dv=1), n)
    _t3_add_into(zn, _t3_mono(_t3_subst_v(ys, n), n, dq=1, dv=1), n)  # qv Y(q,qv,u)
    _t3_add_into(zn, _t3_mono(_t3_subst_v(z, n), n, dq=1, du=1, dv=1), n)  # quv Z(q,u,qv)

    return _t3_clean(xn), _t3_clean(yn), _t3_clean(zn)


def pa4_system_solution(order: int) -> tuple[Series3, Series3, Series3]:
    """Joint fixed point (X, Y, Z) of the trivariate system, to the order.

    Every right-hand-side term carries a factor q, so each sweep is exact to
    one more order; sweeps run on the updates and must vanish by sweep
    order+1, which is asserted.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    n = order
    seed = {(1, 1): [0, 1] + [0] * (n - 1)}
    x: dict = {}
    y: dict = {k: r[:] for k, r in seed.items()}
    z: dict = {}
    dx, dy, dz = {}, {k: r[:] for k, r in seed.items()}, {}
    sweep = 1
    while dx or dy or dz:
        sweep += 1
        if sweep > n + 2:
            raise AssertionError("4-sided fixed point failed to stabilize")
        dx, dy, dz = _pa4_linear_map(dx, dy, dz, n)
        for d in (dx, dy, dz):
            for row in d.values():
                v = _intpoly.valuation(row)
                if v is not None and v < sweep:
                    raise AssertionError(
                        f"sweep {sweep} contributed below q-valuation {sweep}")
        _t3_add_into(x, dx, n)
        _t3_add_into(y, dy, n)
        _t3_add_into(z, dz, n)
    return (Series3(n, x), Series3(n, y), Series3(n, z))


def pa4_series(order: int) -> CountTable:
    """4-sided counts: 8*(X+Y+Z) at u=v=1 from the trivariate fixed point."""
    x, y, z = pa4_system_solution(order)
    s = (x.eval_catalytic() + y.eval_catalytic() + z.eval_catalytic()).scale(8)
    return CountTable(4, s.coeffs[1:], "functional")


# ---------------------------------------------------------------------------
# Float mode (x = 2q) for large orders.
# ---------------------------------------------------------------------------

# Partial terms of the theorem sum cancel against each other at ~0.272 bits
# per order (the alternating (1-2q)^-m pile-up); mantissas carry that margin.
_CANCELLATION_BITS_PER_ORDER = 0.29


def pa3_scaled_float(order: int, precision: int = 40) -> FloatSeries1:
    """Theorem route in x = 2q on fixed-point mantissas.

    Coefficient n of the result approximates PA_n * 2^-n to the requested
    number of significant digits.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    n = order
    out_bits = FloatSeries1.scale_bits_for(precision)
    work = out_bits + 64 + int(_CANCELLATION_BITS_PER_ORDER * n) + 1
    one = 1 << work

    term = [0] * (n + 1)
    if n >= 2:
        term[2] = -(one >> 2)                      # -q^2 = -x^2/4
        for i in range(3, n + 1):                  # / (1-x)
            term[i] += term[i - 1]
        for i in range(3, n + 1):                  # / (1-x/2-x^2/4)
            term[i] += (term[i - 1] >> 1) + (term[i - 2] >> 2)
    total = term[:]
    m = 1
    while 2 * (m + 1) <= n:
        nxt = [0] * (n + 1)
        for i in range(n, 1, -1):
            v = term[i - 2] >> 2
            if i - 3 >= 0:
                v -= term[i - 3] >> 3
            if i - 2 - m >= 0:
                v -= term[i - 2 - m] >> (2 + m)
            if i - 3 - m >= 0:
                v += term[i - 3 - m] >> (3 + m)
            if i - 4 - m >= 0:
                v -= term[i - 4 - m] >> (4 + m)
            nxt[i] = -v
        for i in range(1, n + 1):
            nxt[i] += nxt[i - 1]
        md = m + 2
        for i in range(1, n + 1):
            v = nxt[i - 1] >> 1
            if i - md >= 0:
                v += nxt[i - md] >> md
            nxt[i] += v
        term = nxt
        m += 1
        for i in range(2 * m, n + 1):
            total[i] += term[i]
    # prefactor -2q^3(1-q)^2/(1-2q)^2 = (-x^3/4)(1 - x + x^2/4)/(1-x)^2
    out = [0] * (n + 1)
    for i in range(n, 2, -1):
        v = total[i - 3] >> 2
        if i - 4 >= 0:
            v -= total[i - 4] >> 2
        if i - 5 >= 0:
            v += total[i - 5] >> 4
        out[i] = -v
    for _ in range(2):
        for i in range(1, n + 1):
            out[i] += out[i - 1]
    # + 2q(3-10q+9q^2-q^3)/((1-2q)^2(1-q)) = (3x-5x^2+9x^3/4-x^4/8)/((1-x)^2(1-x/2))
    rat = [0] * (n + 1)
    if n >= 1:
        rat[1] = 3 * one
    if n >= 2:
        rat[2] = -5 * one
    if n >= 3:
        rat[3] = (9 * one) >> 2
    if n >= 4:
        rat[4] = -(one >> 3)
    for _ in range(2):
        for i in range(1, n + 1):
            rat[i] += rat[i - 1]
    for i in range(1, n + 1):
        rat[i] += rat[i - 1] >> 1

    drop = work - out_bits
    return FloatSeries1([(out[i] + rat[i]) >> drop for i in range(n + 1)],
                        out_bits, precision)
