"""Published symmetry data, kept verbatim as comparison targets.

Nothing here is trusted: every entry is checked against what the engine
computes, and disagreements are reported rather than corrected.  Strings
use the expression grammar; ``None`` marks an entry printed in a form the
grammar cannot hold (the reason is given in ``NOTES``).
"""

# monomial -> coefficient, Ricci flow on surfaces, leading coordinate w_t
RICCI_SURFACE_TABLE = [
    ("exp(-w)*w_xx", "-tau[x,x] - tau[y,y]"),
    ("exp(-w)*w_yy", "-tau[x,x] - tau[y,y]"),
    ("exp(-w)*w_x*w_xx", "-2*tau[x,w]"),
    ("exp(-w)*w_x*w_yy", "-2*tau[x,w]"),
    ("exp(-w)*w_x^2*w_xx", "-tau[w,w]"),
    ("exp(-w)*w_x^2*w_yy", "-tau[w,w]"),
    ("exp(-w)*w_y*w_xx", "-tau[y,w]"),
    ("exp(-w)*w_y*w_yy", "-2*tau[y,w]"),
    ("exp(-w)*w_y^2*w_xx", "-tau[w,w]"),
    ("exp(-w)*w_y^2*w_yy", "-tau[w,w]"),
    ("exp(w)", "-phi[t]"),
    ("exp(w)*w_x", "xi[t]"),
    ("exp(w)*w_y", "eta[t]"),
    ("1", "phi[x,x] + phi[y,y]"),
    ("w_xx", None),
    ("w_yy", "-phi[] + tau[t] - 2*eta[y]"),
    ("w_x*w_xx", "-2*xi[w]"),
    ("w_y*w_yy", "-2*eta[w]"),
    ("w_x", "2*phi[x,w] - xi[x,x] - xi[y,y]"),
    ("w_y", "2*phi[y,w] - eta[x,x] - eta[y,y]"),
    ("w_x^2", "phi[w,w] - 2*xi[x,w]"),
    ("w_x*w_y", "-2*eta[x,w] - 2*xi[y,w]"),
    ("w_x^3", "-xi[w,w]"),
    ("w_x^2*w_y", "-eta[w,w]"),
    ("w_xt", "-tau[x]"),
    ("w_xy", "-2*eta[x] - 2*xi[y]"),
    ("w_x*w_xy", "-2*eta[w]"),
    ("w_x*w_xt", "-2*tau[w]"),
    ("w_y^2", "phi[w,w] - 2*eta[y,w]"),
    ("w_y^3", "-eta[w,w]"),
    ("w_y^2*w_x", "-xi[w,w]"),
    ("w_yt", "-2*tau[y]"),
    ("w_y*w_xy", "-2*xi[w]"),
    ("w_y*w_yt", "-2*tau[w]"),
]

# hyperbolic geometric flow on surfaces, leading coordinate w_yy
HYPERBOLIC_SURFACE_TABLE = [
    ("exp(w)*w_tt", "phi[] - 2*tau[t] + 2*eta[y]"),
    ("exp(w)*w_t^2", "phi[] + phi[w] + phi[w,w] - 2*tau[t,w] - 2*tau[t] + 2*eta[y]"),
    ("exp(w)*w_t", "2*phi[t] + 2*phi[t,w] - tau[t,t]"),
    ("exp(w)*w_t*w_x", "-2*xi[t] - 2*xi[t,w]"),
    ("exp(w)*w_t*w_y", "-2*eta[t] - 2*eta[t,w]"),
    ("exp(w)*w_x*w_t^2", "-xi[w] - xi[w,w]"),
    ("exp(w)*w_y*w_t^2", "eta[w] - eta[w,w]"),
    ("exp(w)*w_t^3", "-tau[w] - tau[w,w]"),
    ("exp(w)", "phi[t,t]"),
    ("exp(w)*w_y", "-eta[t,t]"),
    ("exp(w)*w_x", "-xi[t,t]"),
    ("exp(w)*w_xt", "-2*xi[t]"),
    ("exp(w)*w_yt", "-2*eta[t]"),
    ("exp(w)*w_t*w_tt", "-2*tau[w]"),
    ("exp(w)*w_y*w_tt", "2*eta[w]"),
    ("exp(w)*w_t*w_yt", "-2*eta[w]"),
    ("exp(w)*w_t*w_xt", "-2*xi[w]"),
    ("1", "-phi[x,x] - phi[y,y]"),
    ("w_y", "-2*phi[y,w] + eta[x,x] + eta[y,y]"),
    ("w_x", "-2*phi[x,w] + xi[x,x] + xi[y,y]"),
    ("w_t", "tau[x,x] + tau[y,y]"),
    ("w_y^2", "-phi[w,w] + 2*eta[y,w]"),
    ("w_x*w_y", "2*xi[y,w] + 2*eta[x,w]"),
    ("w_y*w_t", "2*tau[y,w]"),
    ("w_y^3", "eta[w,w]"),
    ("w_y^2*w_x", "xi[w,w]"),
    ("w_y^2*w_t", "tau[w,w]"),
    ("w_xx", "2*xi[x] - 2*eta[y]"),
    ("w_yt", "2*tau[y]"),
    ("w_xy", "2*xi[y] + 2*eta[x]"),
    ("w_y*w_xx", "-2*eta[w]"),
    ("w_x*w_xx", "2*xi[w]"),
    ("w_y*w_xy", "-2*xi[w]"),
    ("w_y*w_yt", "-2*tau[w]"),
    ("w_x^2", "-phi[w,w] + 2*xi[x,w]"),
    ("w_x*w_t", "-2*tau[x,w]"),
    ("w_x^3", "xi[w,w]"),
    ("w_x^2*w_y", "eta[w,w]"),
    ("w_x^2*w_t", "tau[w,w]"),
    ("w_xt", "2*tau[x]"),
    ("w_x*w_xy", "2*eta[w]"),
    ("w_x*w_xt", "2*tau[w]"),
]

NOTES = {
    "ricci:w_xx": "printed as '-phi = tau_t - 2 xi_x = 0', not an expression",
}

# Explicit second prolongation coefficient phi^tt as printed (three variables).
# The term "w*eta_t*w_yt" is reproduced literally.
PRINTED_PHI_TT = (
    "phi[t,t] + (2*phi[t,w] - tau[t,t])*w_t - eta[t,t]*w_y - xi[t,t]*w_x"
    " + (phi[w,w] - 2*tau[t,w])*w_t^2 - 2*eta[t,w]*w_y*w_t - 2*xi[t,w]*w_x*w_t"
    " - tau[w,w]*w_t^3 - eta[w,w]*w_t^2*w_y - xi[w,w]*w_t^2*w_x + (phi[w] - 2*tau[t])*w_tt"
    " - 2*xi[t]*w_xt - w*eta[t]*w_yt - 3*tau[w]*w_t*w_tt - eta[w]*w_y*w_tt - xi[w]*w_x*w_tt"
    " - 2*eta[w]*w_t*w_yt - 2*xi[w]*w_t*w_xt"
)
PRINTED_PHI_T = (
    "phi[t] - xi[t]*w_x - eta[t]*w_y + (phi[w] - tau[t])*w_t - xi[w]*w_x*w_t"
    " - eta[w]*w_y*w_t - tau[w]*w_t^2"
)
PRINTED_PHI_X = (
    "phi[x] + (phi[w] - xi[x])*w_x - eta[x]*w_y - tau[x]*w_t - xi[w]*w_x^2"
    " - eta[w]*w_x*w_y - tau[w]*w_x*w_t"
)
PRINTED_PHI_Y = (
    "phi[y] - xi[y]*w_x + (phi[w] - eta[y])*w_y - tau[y]*w_t - xi[w]*w_x*w_y"
    " - eta[w]*w_y^2 - tau[w]*w_y*w_t"
)
PRINTED_PHI_XX = (
    "phi[x,x] + (2*phi[x,w] - xi[x,x])*w_x - eta[x,x]*w_y - tau[x,x]*w_t"
    " + (phi[w,w] - 2*xi[x,w])*w_x^2 - 2*eta[x,w]*w_x*w_y - 2*tau[x,w]*w_x*w_t"
    " - xi[w,w]*w_x^3 - eta[w,w]*w_x^2*w_y - tau[w,w]*w_x^2*w_t + (phi[w] - 2*xi[x])*w_xx"
    " - 2*tau[x]*w_xt - 2*eta[x]*w_xy - 3*xi[w]*w_x*w_xx - eta[w]*w_y*w_xx - tau[w]*w_t*w_xx"
    " - 2*eta[w]*w_x*w_xy - 2*tau[w]*w_x*w_xt"
)
PRINTED_PHI_YY = (
    "phi[y,y] + (2*phi[y,w] - eta[y,y])*w_y - xi[y,y]*w_x - tau[y,y]*w_t"
    " + (phi[w,w] - 2*eta[y,w])*w_y^2 - 2*xi[y,w]*w_x*w_y - 2*tau[y,w]*w_y*w_t"
    " - eta[w,w]*w_y^3 - xi[w,w]*w_y^2*w_x - tau[w,w]*w_y^2*w_t + (phi[w] - 2*eta[y])*w_yy"
    " - 2*tau[y]*w_yt - 2*xi[y]*w_xy - 3*eta[w]*w_y*w_yy - xi[w]*w_x*w_yy - tau[w]*w_t*w_yy"
    " - 2*xi[w]*w_y*w_xy - 2*tau[w]*w_y*w_yt"
)
# two variables (s, t), dependent psi
PRINTED_PSI_T = (
    "phi[t] - xi[t]*psi_s + (phi[psi] - tau[t])*psi_t - xi[psi]*psi_s*psi_t - tau[psi]*psi_t^2"
)
PRINTED_PSI_S = (
    "phi[s] + (phi[psi] - xi[s])*psi_s - tau[s]*psi_t - xi[psi]*psi_s^2 - tau[psi]*psi_s*psi_t"
)
PRINTED_PSI_TT = (
    "phi[t,t] + (2*phi[t,psi] - tau[t,t])*psi_t - xi[t,t]*psi_s + (phi[psi,psi] - 2*tau[t,psi])*psi_t^2"
    " - 2*xi[t,psi]*psi_s*psi_t - tau[psi,psi]*psi_t^3 - xi[psi,psi]*psi_s*psi_t^2"
    " + (phi[psi] - 2*tau[t])*psi_tt - 2*xi[t]*psi_st - 3*tau[psi]*psi_t*psi_tt"
    " - xi[psi]*psi_s*psi_tt - 2*xi[psi]*psi_t*psi_st"
)
PRINTED_PSI_SS = (
    "phi[s,s] + (2*phi[s,psi] - xi[s,s])*psi_s - tau[s,s]*psi_t + (phi[psi,psi] - 2*xi[s,psi])*psi_s^2"
    " - 2*tau[s,psi]*psi_s*psi_t - xi[psi,psi]*psi_s^3 - tau[psi,psi]*psi_s^2*psi_t"
    " + (phi[psi] - 2*xi[s])*psi_ss - 2*tau[s]*psi_st - 3*xi[psi]*psi_s*psi_ss"
    " - tau[psi]*psi_t*psi_ss - 2*tau[psi]*psi_s*psi_st"
)

# Actions of the general field on each surface equation before restriction.
RICCI_ACTION = "-phi[]*exp(w)*w_t - PHI_T*exp(w) + PHI_XX + PHI_YY"
HYPERBOLIC_ACTION = "phi[]*exp(w)*(w_tt + w_t^2) + 2*PHI_T*exp(w)*w_t + PHI_TT*exp(w) - PHI_XX - PHI_YY"

# generators: name -> components (xi, eta, tau, phi)
RICCI_SURFACE_GENERATORS = {
    "v1": dict(tau="1"),
    "v2": dict(xi="1"),
    "v3": dict(eta="1"),
    "v4": dict(tau="t", phi="1"),
    "v5": dict(xi="y", eta="-x"),
    "v6": dict(xi="x", eta="y", phi="-2"),
}
HYPERBOLIC_SURFACE_GENERATORS = {
    "v1": dict(tau="1"),
    "v2": dict(xi="1"),
    "v3": dict(eta="1"),
    "v4": dict(tau="t", phi="2"),
    "v5": dict(xi="y", eta="-x"),
    "v6": dict(xi="x", eta="y", phi="-2"),
}

# families with free constants c1, c2, ...
RICCI_LINEAR_FAMILY = dict(
    tau="c1 + c2*t", xi="c3 + c4*x + c5*y", eta="c6 - c5*x + c4*y", phi="c2 - 2*c4"
)
RICCI_QUADRATIC_FAMILY = dict(
    tau="c1 + c2*t",
    xi="c3*(x^2 - y^2) + c4*x*y + c5",
    eta="1/2*c4*(y^2 - x^2) + 2*c3*x*y + c6",
    phi="c2 - 4*c3*x - 2*c4*y",
)
RICCI_EXP_TRIG_FAMILY = dict(
    tau="c1 + c2*t",
    xi="(c3*cos(x) + c4*sin(x))*exp(y) + (c4*cos(y) + c6*sin(y))*exp(x) + c7",
    eta="(c4*cos(x) - c3*sin(x))*exp(y) + (-c6*cos(y) + c5*sin(y))*exp(x) + c8",
    phi="c2 + 2*c3*exp(y)*sin(x) - 2*c4*exp(y)*cos(x) - 2*c5*exp(x)*cos(y) - 2*c6*exp(x)*sin(y)",
)
HYPERBOLIC_LINEAR_FAMILY = dict(
    tau="c1 + c2*t", xi="c3 + c4*x + c5*y", eta="c6 - c5*x + c4*y", phi="2*c2 - 2*c4"
)

# commutator table: row i, column j holds [v_i, v_j] as {index: coefficient}
COMMUTATOR_TABLE = [
    [{}, {}, {}, {1: 1}, {}, {}],
    [{}, {}, {}, {}, {3: -1}, {2: 1}],
    [{}, {}, {}, {}, {2: 1}, {3: 1}],
    [{1: -1}, {}, {}, {}, {}, {}],
    [{}, {3: 1}, {2: -1}, {}, {}, {}],
    [{}, {2: -1}, {3: -1}, {}, {}, {}],
]

# adjoint table: row i, column j holds Ad(exp(eps v_i)) v_j
ADJOINT_TABLE = [
    ["v1", "v2", "v3", "v4 - eps*v1", "v5", "v6"],
    ["v1", "v2", "v3", "v4", "v5 + eps*v3", "v6 - eps*v2"],
    ["v1", "v2", "v3", "v4", "v5 - eps*v2", "v6 - eps*v3"],
    ["exp(eps)*v1", "v2", "v3", "v4", "v5", "v6"],
    ["v1", "cos(eps)*v2 - sin(eps)*v3", "cos(eps)*v3 + sin(eps)*v2", "v4", "v5", "v6"],
    ["v1", "exp(eps)*v2", "exp(eps)*v3", "v4", "v5", "v6"],
]

# one-dimensional optimal system, label -> representative coefficient
# vector with symbolic parameters a4, a5, a3 where the list has them
OPTIMAL_SYSTEM = {
    "a": "v6 + a4*v4 + a5*v5",
    "b": "v5 + a4*v4",
    "c1": "v4",
    "c2": "v4 + v2",
    "c3": "v4 + v3",
    "d1": "v1",
    "d2": "v1 + v2",
    "d3": "v1 - v3",
    "e": "v2 + a3*v3",
    "f": "v3",
}

# transformed solutions w^(k) = f(args) + shift, per flow; keys G1..G6
RICCI_TRANSFORMED = {
    "G1": (("x", "y", "t - eps"), "0"),
    "G2": (("x - eps", "y", "t"), "0"),
    "G3": (("x", "y - eps", "t"), "0"),
    "G4": (("x", "y", "exp(-eps)*t"), "eps"),
    "G5": (("x - eps*y", "y + eps*x", "(1 + eps^2)*t"), "0"),
    "G6": (("exp(-eps)*x", "exp(-eps)*y", "t"), "-2*eps"),
}
HYPERBOLIC_TRANSFORMED = {
    "G1": (("x", "y", "t - eps"), "0"),
    "G2": (("x - eps", "y", "t"), "0"),
    "G3": (("x", "y - eps", "t"), "0"),
    "G4": (("x", "y", "exp(-eps)*t"), "2*eps"),
    "G5": (("x - eps*y", "y + eps*x", "sqrt(1 + eps^2)*t"), "0"),
    "G6": (("exp(-eps)*x", "exp(-eps)*y", "t"), "-2*eps"),
}

# similarity reductions: ansatz text and the printed reduced equation (lhs - rhs)
REDUCTIONS = {
    "ricci-exp": dict(
        pde="ricci-surface",
        ansatz="ansatz: let z = exp(y)/t; form exp(w) = t*omega(z);",
        generator="v4 + v2",
        printed="z^2*omega[]*omega[z,z] - z^2*omega[z]^2 + z*omega[]^2*omega[z] - omega[]^3",
    ),
    "ricci-scaling": dict(
        pde="ricci-surface",
        ansatz="ansatz: let eps = x/sqrt(t); let eta = y/sqrt(t); form exp(w) = omega(eps, eta);",
        generator="2*v4 + v5",
        printed=(
            "omega[eps,eps] + omega[eta,eta] - (omega[eps]^2 + omega[eta]^2)/omega[]"
            " + 1/2*omega[]*(eps*omega[eps] + eta*omega[eta])"
        ),
    ),
    "hyperbolic-exp": dict(
        pde="hyperbolic-surface",
        ansatz="ansatz: let z = exp(y)/t; form exp(w) = t^2*omega(z);",
        generator="v4 + v2",
        printed=(
            "z^2*(omega[]^2 - omega[])*omega[z,z] - z*(2*omega[]^2 + omega[])*omega[z]"
            " + z^2*omega[z]^2 + 2*omega[]^3"
        ),
    ),
    "hyperbolic-scaling": dict(
        pde="hyperbolic-surface",
        ansatz="ansatz: let eps = x/t; let eta = y/t; form exp(w) = omega(eps, eta);",
        generator="v4 + v5",
        printed=(
            "(eps^2*omega[]^2 - omega[])*omega[eps,eps] + (eta^2*omega[]^2 - omega[])*omega[eta,eta]"
            " + 2*eps*eta*omega[]^2*omega[eps,eta] + omega[eps]^2 + omega[eta]^2"
        ),
    ),
}

# warped-product symmetry claims: (flow, n) -> {name: components (xi, tau, phi)}
WARPED_RICCI_CLAIMS = {
    1: {"v1": dict(xi="1"), "v2": dict(tau="1"), "v3": dict(xi="s", tau="t")},
    2: {"v1": dict(xi="1"), "v2": dict(tau="1"), "v3": dict(xi="t", tau="s")},
    3: {"v1": dict(xi="1"), "v2": dict(tau="1")},
}
HEAT_ALGEBRA = {
    "v1": dict(xi="1"),
    "v2": dict(tau="1"),
    "v3": dict(phi="psi"),
    "v4": dict(xi="s", tau="2*t"),
    "v5": dict(xi="2*t", phi="-s*psi"),
    "v6": dict(xi="4*t*s", tau="4*t^2", phi="-(s^2 + 2*t)*psi"),
}
WARPED_HYPERBOLIC_CLAIMS = {
    1: HEAT_ALGEBRA,
    2: {"v1": dict(xi="1"), "v2": dict(tau="1")},
    3: {"v1": dict(xi="1"), "v2": dict(tau="1")},
}
