"""Closed forms of the specialised summation displays.

Each function takes a ``SummationInstance`` and returns ``(lhs, rhs)`` of the
specialised display at the instance's (m, n), written directly in terms of the
raw parameters (bases p, q, the scalars a, b, d, e, x, ...) and raw sequences.
None of this reuses the generic summation code: products, q-shifted factorials
and theta functions are evaluated by the small helpers below.  A function
returns None when the display does not cover the requested (m, n).
"""
def cp(A, k, m):
    """prod_{j=k}^{m} A(j) under the empty/reciprocal convention."""
    if m >= k:
        r = 1
        for j in range(k, m + 1):
            r *= A(j)
        return r
    if m == k - 1:
        return 1
    r = 1
    for j in range(m + 1, k):
        r *= A(j)
    return 1 / r


def poch(x, q, n):
    """(x; q)_n for any integer n."""
    return cp(lambda i: 1 - x * q ** i, 0, n - 1)


def poch_many(xs, q, n):
    r = 1
    for x in xs:
        r *= poch(x, q, n)
    return r


def theta_ref(x, q, terms=120):
    """theta(x) = (x; q)_inf (q/x; q)_inf by a plain product loop."""
    r = 1
    qi = 1
    for _ in range(terms):
        r *= (1 - x * qi) * (1 - q / x * qi)
        qi *= q
    return r


def _bilateral(term, ratio, m, n):
    """sum_{k=-n}^{m} term(k) and prod_1^m ratio - prod_{-n}^0 1/ratio."""
    lhs = sum(term(k) for k in range(-n, m + 1))
    rhs = cp(ratio, 1, m) - 1 / cp(ratio, -n, 0)
    return lhs, rhs


# -- I ------------------------------------------------------------------------

def ref_one_xy(inst):
    b, c, d = inst.aux["b"], inst.aux["c"], inst.aux["d"]

    def term(k):
        return ((c(k) - d(k)) * cp(lambda j: b(j) - d(j), 1, k - 1)
                / cp(lambda j: b(j) - c(j), 1, k))

    return _bilateral(term, lambda j: (b(j) - d(j)) / (b(j) - c(j)), inst.m, inst.n)


def ref_subbarao_verma_31(inst):
    X, Y, Z = inst.aux["x"], inst.aux["y"], inst.aux["z"]
    a = inst.params["a"]

    def num(j):
        return (1 - X(j)) * (1 - Y(j))

    def den(j):
        return (1 - a * Z(j)) * (1 - X(j) * Y(j) / (a * Z(j)))

    def term(k):
        az = a * Z(k)
        return az * (1 - X(k) / az) * (1 - Y(k) / az) * cp(num, 1, k - 1) / cp(den, 1, k)

    return _bilateral(term, lambda j: num(j) / den(j), inst.m, inst.n)


# -- II -----------------------------------------------------------------------

def ref_xy_xy(inst):
    a, b, c, d = (inst.aux[s] for s in "abcd")

    def term(k):
        return ((a(k) - b(k)) * (c(k) - d(k))
                * cp(lambda j: a(j) - c(j), 1, k - 1) / cp(lambda j: a(j) - d(j), 1, k)
                * cp(lambda j: b(j) - d(j), 1, k - 1) / cp(lambda j: b(j) - c(j), 1, k))

    def ratio(j):
        return (a(j) - c(j)) * (b(j) - d(j)) / ((a(j) - d(j)) * (b(j) - c(j)))

    return _bilateral(term, ratio, inst.m, inst.n)


def ref_subbarao_verma_21(inst):
    u, v, w, z = (inst.aux[s] for s in "uvwz")

    def num(j):
        return (1 - u(j) ** 2) * (1 - v(j) ** 2) * (1 - w(j) ** 2) * (1 - z(j) ** 2)

    def den(j):
        U, V, W, Z = u(j), v(j), w(j), z(j)
        return ((1 - U * V * W / Z) * (1 - U * V * Z / W)
                * (1 - W * Z * U / V) * (1 - W * Z * V / U))

    def term(k):
        U, V, W, Z = u(k), v(k), w(k), z(k)
        return (U * V * W / Z * (1 - U * V * W * Z) * (1 - W * Z / (U * V))
                * (1 - U * Z / (V * W)) * (1 - V * Z / (U * W))
                * cp(num, 1, k - 1) / cp(den, 1, k))

    return _bilateral(term, lambda j: num(j) / den(j), inst.m, inst.n)


def ref_ab_form(inst):
    A1, A2, B1, B2 = (inst.aux[s] for s in ("A1", "A2", "B1", "B2"))

    def da(j):
        return 1 - A2(j) * B1(j) / B2(j)

    def db(j):
        return 1 - B2(j) * A1(j) / A2(j)

    def term(k):
        return ((1 / A2(k) - 1 / B2(k)) * (A1(k) / A2(k) - B1(k) / B2(k)) * A2(k) * B2(k)
                * cp(lambda j: 1 - A1(j), 1, k - 1) / cp(da, 1, k)
                * cp(lambda j: 1 - B1(j), 1, k - 1) / cp(db, 1, k))

    def ratio(j):
        return (1 - A1(j)) * (1 - B1(j)) / (da(j) * db(j))

    return _bilateral(term, ratio, inst.m, inst.n)


def ref_krattenthaler_chu(inst):
    if inst.n != 0:
        return None
    a, b = inst.aux["a"], inst.aux["b"]
    x = inst.params["x"]
    b0 = b(0)
    lhs = 0
    for k in range(0, inst.m + 1):
        lhs += ((b0 - b(k) * a(k)) / (b0 - b0 * a(0))
                * cp(lambda j: (1 - a(j)) * (b0 - b(j) * x), 0, k - 1)
                / cp(lambda j: (1 - a(j) / x) * (b0 - b(j)), 1, k) / x ** k)
    rhs = (cp(lambda j: (1 - a(j)) * (b0 - b(j) * x), 1, inst.m)
           / cp(lambda j: (1 - a(j) / x) * (b0 - b(j)), 1, inst.m) / x ** inst.m)
    return lhs, rhs


def chu_phi_psi(aux, x, y):
    a, b, c, d = (aux[s] for s in ("ca", "cb", "cc", "cd"))

    def phi(t, k):
        return cp(lambda i: a(i) + t * b(i), 0, k - 1)

    def psi(t, k):
        return cp(lambda i: c(i) + t * d(i), 0, k - 1)

    return phi, psi


def chu_display(aux, x, y, lo, hi):
    """Both sides of Chu's identity summed over k = lo .. hi."""
    a, b, c, d = (aux[s] for s in ("ca", "cb", "cc", "cd"))
    phi, psi = chu_phi_psi(aux, x, y)

    def R(t):
        return phi(x, t) * psi(y, t) / (phi(y, t) * psi(x, t))

    lhs = (x - y) * sum((a(k) * d(k) - b(k) * c(k)) * phi(x, k) * psi(y, k)
                        / (phi(y, k + 1) * psi(x, k + 1)) for k in range(lo, hi + 1))
    return lhs, R(lo) - R(hi + 1)


def ref_chu_theorem_A(inst):
    x, y = inst.params["x"], inst.params["y"]
    return chu_display(inst.aux, x, y, -inst.n - 1, inst.m - 1)


# -- III ----------------------------------------------------------------------

def ref_pair_C2(inst):
    a_, b_ = inst.params["a"], inst.params["b"]
    a, b, c, d = (inst.aux[s] for s in "abcd")

    def F(x, y):
        return (1 - a_ * x * y) * (1 - b_ * x / y)

    def G(x, y):
        return (x - y) * (1 - b_ / (a_ * x * y))

    def term(k):
        return (F(a(k), b(k)) * G(c(k), d(k))
                * cp(lambda j: F(a(j), c(j)), 1, k - 1) / cp(lambda j: F(a(j), d(j)), 1, k)
                * cp(lambda j: G(b(j), d(j)), 1, k - 1) / cp(lambda j: G(b(j), c(j)), 1, k))

    def ratio(j):
        return F(a(j), c(j)) * G(b(j), d(j)) / (F(a(j), d(j)) * G(b(j), c(j)))

    return _bilateral(term, ratio, inst.m, inst.n)


def ref_gasper_rahman(inst):
    P = inst.params
    p, q, a, b, d, x = P["p"], P["q"], P["a"], P["b"], P["d"], P["x"]
    m, n = inst.m, inst.n
    lhs = 0
    for k in range(-n, m + 1):
        lhs += ((1 - a * d * p ** k * q ** k) * (1 - b / d * p ** k * q ** (-k))
                / ((1 - a * d) * (1 - b / d))
                * poch_many([a, b], p, k) * poch_many([x, a * d * d / (b * x)], q, k)
                / (poch_many([d * q, a * d * q / b], q, k)
                   * poch_many([a * d * p / x, b * p * x / d], p, k)) * q ** k)
    pre = ((1 - a) * (1 - b) * (1 - x) * (1 - a * d * d / (b * x))
           / ((1 - a * d) * (1 - b / d) * (d - x) * (1 - a * d / (b * x))))
    t1 = (poch_many([a * p, b * p], p, m) * poch_many([x * q, a * d * d * q / (b * x)], q, m)
          / (poch_many([d * q, a * d * q / b], q, m) * poch_many([a * d * p / x, b * p * x / d], p, m)))
    t2 = (poch_many([x / (a * d), d / (b * x)], p, n + 1) * poch_many([1 / d, b / (a * d)], q, n + 1)
          / (poch_many([1 / x, b * x / (a * d * d)], q, n + 1) * poch_many([1 / a, 1 / b], p, n + 1)))
    return lhs, pre * (t1 - t2)


def ref_gosper(inst):
    if inst.n != 0:
        return None
    P = inst.params
    p, q, a, x = P["p"], P["q"], P["a"], P["x"]
    m = inst.m
    lhs = sum((1 - a * p ** k * q ** k) / (1 - a) * poch(a, p, k) * poch(1 / x, q, k)
              / (poch(q, q, k) * poch(a * p * x, p, k)) * x ** k for k in range(m + 1))
    rhs = poch(a * p, p, m) * poch(q / x, q, m) / (poch(q, q, m) * poch(a * p * x, p, m)) * x ** m
    return lhs, rhs


def ref_gasper(inst):
    if inst.n != 0:
        return None
    P = inst.params
    p, q, a, b, x = P["p"], P["q"], P["a"], P["b"], P["x"]
    m = inst.m
    lhs = sum((1 - a * p ** k * q ** k) * (1 - b * p ** k * q ** (-k)) / ((1 - a) * (1 - b))
              * poch_many([a, b], p, k) * poch_many([x, a / (b * x)], q, k)
              / (poch_many([q, a * q / b], q, k) * poch_many([a * p / x, b * p * x], p, k)) * q ** k
              for k in range(m + 1))
    rhs = (poch_many([a * p, b * p], p, m) * poch_many([x * q, a * q / (b * x)], q, m)
           / (poch_many([q, a * q / b], q, m) * poch_many([a * p / x, b * p * x], p, m)))
    return lhs, rhs


# -- IV -----------------------------------------------------------------------

def ref_pair_C3(inst):
    """Pair (x+y)(x+b/(ay)) against (x-y)(1-b/(axy)); numerator uses (a_j + c_j)."""
    a_, b_ = inst.params["a"], inst.params["b"]
    a, b, c, d = (inst.aux[s] for s in "abcd")

    def num_a(j):
        return (a(j) + c(j)) * (a(j) + b_ / (a_ * c(j)))

    def den_a(j):
        return (a(j) + d(j)) * (a(j) + b_ / (a_ * d(j)))

    def num_b(j):
        return (b(j) - d(j)) * (1 - b_ / (a_ * b(j) * d(j)))

    def den_b(j):
        return (b(j) - c(j)) * (1 - b_ / (a_ * b(j) * c(j)))

    def term(k):
        return ((a(k) + b(k)) * (a(k) + b_ / (a_ * b(k))) * (c(k) - d(k))
                * (1 - b_ / (a_ * c(k) * d(k)))
                * cp(num_a, 1, k - 1) / cp(den_a, 1, k) * cp(num_b, 1, k - 1) / cp(den_b, 1, k))

    return _bilateral(term, lambda j: num_a(j) * num_b(j) / (den_a(j) * den_b(j)),
                      inst.m, inst.n)


# -- V ------------------------------------------------------------------------

def ref_pair_S2(inst):
    dd = inst.params["d"]
    a, b, c, d = (inst.aux[s] for s in "abcd")

    def h(x, y):
        return (y - x) * (1 - x * y / dd)

    def term(k):
        return ((b(k) - a(k)) * (1 - a(k) * b(k) / dd) * (d(k) - c(k)) * (1 - c(k) * d(k) / dd)
                * cp(lambda j: h(a(j), c(j)), 1, k - 1) / cp(lambda j: h(a(j), d(j)), 1, k)
                * cp(lambda j: h(b(j), d(j)), 1, k - 1) / cp(lambda j: h(b(j), c(j)), 1, k))

    def ratio(j):
        return h(a(j), c(j)) * h(b(j), d(j)) / (h(a(j), d(j)) * h(b(j), c(j)))

    return _bilateral(term, ratio, inst.m, inst.n)


def ref_chu_gasper_rahman(inst):
    if inst.n != 0:
        return None
    a, b = inst.aux["a"], inst.aux["b"]
    d, x = inst.params["d"], inst.params["x"]
    b0 = b(0)

    def num(j):
        return (1 - a(j)) * (1 - a(j) / d) * (b0 - b(j) * x) * (b0 - b(j) * d / x)

    def den(j):
        return (b0 - b(j)) * (b0 - b(j) * d) * (1 - a(j) / x) * (1 - a(j) * x / d)

    lhs = sum((b0 - a(k) * b(k)) * (b(k) - a(k) * b0 / d) * cp(num, 1, k - 1) / cp(den, 1, k)
              for k in range(inst.m + 1))
    rhs = x / ((d - x) * (x - 1)) * cp(lambda j: num(j) / den(j), 1, inst.m)
    return lhs, rhs


def ref_macdonald_432(inst):
    if inst.n != 0:
        return None
    a, b = inst.aux["a"], inst.aux["b"]
    d, e, x = inst.params["d"], inst.params["e"], inst.params["x"]

    def na(j):
        return (1 - a(j)) * (1 - a(j) / d)

    def da(j):
        return (1 - a(j) * e / x) * (1 - a(j) * x / (d * e))

    def nb(j):
        return (1 - b(j) * d * e * e / x) * (1 - x * b(j))

    def db(j):
        return (1 - d * e * b(j)) * (1 - e * b(j))

    lhs = sum((b(k) - a(k) / (d * e)) * (1 - e * a(k) * b(k))
              * cp(na, 1, k - 1) / cp(da, 1, k) * cp(nb, 1, k - 1) / cp(db, 1, k)
              for k in range(inst.m + 1))
    first = da(0) * db(0) / (nb(0) * na(0))
    rest = cp(lambda j: na(j) * nb(j) / (da(j) * db(j)), 1, inst.m)
    return lhs, x / ((x - e) * (x - d * e)) * (first - rest)


def ref_macdonald_general(inst):
    """Macdonald's extension; the unsubscripted c in the a-denominator is read as c_j."""
    a, b, c, dq = inst.aux["a"], inst.aux["b"], inst.aux["c"], inst.aux["d"]
    e = inst.params["e"]

    def na(j):
        return (1 - a(j)) * (1 - a(j) / dq(j))

    def da(j):
        return (1 - a(j) * e / c(j)) * (1 - a(j) * c(j) / (dq(j) * e))

    def nb(j):
        return (1 - b(j) * c(j)) * (1 - b(j) * dq(j) * e * e / c(j))

    def db(j):
        return (1 - b(j) * e) * (1 - b(j) * dq(j) * e)

    def term(k):
        return (e * (1 - a(k) * b(k) * e) * (b(k) - a(k) / (dq(k) * e))
                * (1 - c(k) / e) * (1 - dq(k) * e / c(k))
                * cp(na, 1, k - 1) / cp(da, 1, k) * cp(nb, 1, k - 1) / cp(db, 1, k))

    return _bilateral(term, lambda j: na(j) * nb(j) / (da(j) * db(j)), inst.m, inst.n)


# -- VI -----------------------------------------------------------------------

def ref_elliptic_theta(inst):
    q = inst.params["q"]
    terms = inst.env.truncation.product_terms
    a, b, c, d = (inst.aux[s] for s in "abcd")

    def th(x):
        return theta_ref(x, q, terms)

    def tt(x, y):
        return th(x * y) * th(x / y)

    def term(k):
        return (b(k) / c(k) * tt(a(k), b(k)) * tt(c(k), d(k))
                * cp(lambda j: tt(a(j), c(j)), 1, k - 1) / cp(lambda j: tt(b(j), c(j)), 1, k)
                * cp(lambda j: tt(b(j), d(j)), 1, k - 1) / cp(lambda j: tt(a(j), d(j)), 1, k))

    def ratio(j):
        return tt(a(j), c(j)) * tt(b(j), d(j)) / (tt(b(j), c(j)) * tt(a(j), d(j)))

    return _bilateral(term, ratio, inst.m, inst.n)


# -- the unilateral corollary ---------------------------------------------------------

def ref_unilateral(inst):
    if inst.n != 0:
        return None
    f, g, env = inst.pair.f, inst.pair.g, inst.env
    a, b = inst.aux["a"], inst.aux["b"]
    x = inst.aux["x"]
    b0 = b(0)
    f00 = f(a(0), b0, env)
    lhs = 0
    for k in range(inst.m + 1):
        t = f(a(k), b(k), env) / f00
        for j in range(k):
            t *= f(a(j), b0, env) * g(b(j), x, env)
        for j in range(1, k + 1):
            t /= g(b(j), b0, env) * f(a(j), x, env)
        lhs += t
    rhs = 1
    for j in range(1, inst.m + 1):
        rhs *= f(a(j), b0, env) * g(b(j), x, env) / (g(b(j), b0, env) * f(a(j), x, env))
    return lhs, rhs

