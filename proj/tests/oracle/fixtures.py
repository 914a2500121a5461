"""Independent high-precision reference values for the unit-test fixtures.

Everything here is computed with mpmath, by quadrature where a closed form
is being checked, so the frozen numbers do not share code with the C++
implementation. Run: python3 tests/oracle/fixtures.py
"""
from mpmath import mp, mpf, log, exp, sqrt, pi, e, euler, digamma, loggamma, quad, inf, beta, gamma

mp.dps = 30


def show(name, value):
    print(f"{name:48s} {mp.nstr(value, 20)}")


# specfun
for x in ["0.001", "0.1", "0.5", "1.5", "3.7", "10", "123.25", "1e6"]:
    show(f"lgamma({x})", loggamma(mpf(x)))
for x in ["0.001", "0.1", "0.5", "3.7", "6.5", "100"]:
    show(f"digamma({x})", digamma(mpf(x)))

# rd_core
show("rd_lower h=0 M=2 p=1 D=0.01", -log(mpf("0.02") * e))
show("rd_upper dI=2 M=3 D=0.1", -4 * log(mpf("0.1")))
show("rd_lower_avg cov=0.5 D=0.01", -log(2 * e * mpf("0.02")))
show("posterior_entropy_upper M=4 dI=2", -6 * log(3))

# categorical, M=2, gamma=(1,1), n=100
n = mpf(100)
mi_cat = log(n / (2 * pi * e)) / 2 + digamma(2) / 2 - digamma(1) / 2
show("categorical mi n=100 g=(1,1)", mi_cat)
show("categorical L1 n=100 g=(1,1)", sqrt(pi / (200 * e)) * exp(-mpf(1) / 2))
show("minimax M=5 n=100", sqrt(4 * pi / (200 * e)))
show("minimax M=2 n=1", sqrt(pi / (2 * e)))
show("kamath-vs-rd constant gap", sqrt(2 / pi) - sqrt(pi / (2 * e)))
# Dirichlet(2,2) entropy by quadrature of -int p log p
p22 = lambda t: 6 * t * (1 - t)
show("beta(2,2) entropy (quad)", -quad(lambda t: p22(t) * log(p22(t)), [0, 1]))


# multinomial: re-derived lower bound assembled from quadrature of its pieces
def multinomial_piece(a, b, k):
    a, b = mpf(a), mpf(b)
    dens_theta = lambda t: t ** (a - 1) * (1 - t) ** (b - 1) / beta(a, b)
    e_log_1m = quad(lambda t: dens_theta(t) * log(1 - t), [0, 1])
    e_log_r = quad(lambda t: dens_theta(t) * (log(t) - log(1 - t)), [0, 1])
    dens_r = lambda r: r ** (a - 1) * (1 + r) ** (-a - b) / beta(a, b)
    h_r = -quad(lambda r: dens_r(r) * log(dens_r(r)), [0, 1, inf])
    return h_r + log(k) - 2 * log(2) + 2 * k * e_log_1m + (k - 1) * e_log_r


for d, k, g in [(2, 1, (1, 1)), (2, 4, (2, 2)), (3, 2, (1, 1, 1))]:
    g0 = sum(g)
    show(f"multinomial entropy_lower d={d} k={k} g={g}",
         sum(multinomial_piece(g[i], g0 - g[i], k) for i in range(d - 1)))


def multinomial_printed(d, k, g):
    g = [mpf(v) for v in g]
    g0 = sum(g)
    s = (d - 1) * (log(k) - mpf(2) / k * log(2))
    for i in range(d - 1):
        a = g[i]
        s += log(beta(a, g0 - a)) + (g0 + a + 2 - k) * digamma(g0 - a) - (g0 - 2) * digamma(g0) + (k - a) * digamma(a)
    return s


show("multinomial entropy_lower_printed d=2 k=1 (1,1)", multinomial_printed(2, 1, (1, 1)))
# MI d=2,k=1,gamma=(1,1),n=100 via Fisher route: t=1, h(alpha)=0 (uniform),
# 1/2 E log(k/(2 t (1-t))) by quadrature
e_half_log_fisher = quad(lambda t: log(mpf(1) / (2 * t * (1 - t))) / 2, [0, 1])
show("multinomial mi d=2 k=1 n=100", log(n / (2 * pi * e)) / 2 + e_half_log_fisher)

# gaussian nu via quadrature over K ~ chi^2(d) of the pre-closed-form expression
def nu_total(d, s2):
    d, s2 = mpf(d), mpf(s2)
    a = 1 / (d * s2) + 1
    chi2 = lambda x: x ** (d / 2 - 1) * exp(-x / 2) / (2 ** (d / 2) * gamma(d / 2))
    inner = quad(lambda x: chi2(x) * (log(8 * pi * a * x / (d * s2)) / 2 - sqrt(2 * a * x / (pi * d * s2))), [0, 1, inf])
    return d * (inner - mpf(3) / 2 - 2 * log(2))


show("gaussian nu total d=1 s2=1", nu_total(1, 1))
show("gaussian nu total d=2 s2=0.5", nu_total(2, "0.5"))
show("gaussian nu total d=4 s2=1", nu_total(4, 1))
show("gaussian mi exact d=2 s2=1 n=100", log(51))

# zero-error
H = lambda m: sum(mpf(1) / i for i in range(1, m + 1))
show("zero-error mi n=10", H(11) - 1)
show("zero-error n_necessary l1=0.01", exp(-euler) / mpf("0.02") - 1)
show("harmonic(5)", H(5))
