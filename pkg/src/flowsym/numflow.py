"""Explicit finite-difference solvers for the surface and warped flows.

Surface flows act on the conformal factor u = e^w:

* Ricci:       u_t  = lap(ln u)   (RK4, five-point Laplacian)
* hyperbolic:  u_tt = lap(ln u)   (leapfrog)

Warped flows act on psi(s, t) with the (n-1)(1 - psi_s^2)/psi term
evaluated pointwise; both use RK4, the hyperbolic one on (psi, psi_t).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
import math
import struct
from typing import Callable

import numpy as np
import sympy as sp

from .geoflow import FlowKind

RICCI_DT_FACTOR = 0.25  # dt <= c h^2 min(u)
WAVE_DT_FACTOR = 0.5  # dt <= c h sqrt(min(u))
WARPED_DT_FACTOR = 0.25  # dt <= c h^2 (Ricci), c h (hyperbolic)


class FlowError(RuntimeError):
    def __init__(self, message, time=None, index=None):
        super().__init__(message)
        self.time = time
        self.index = index


class SingularTime(FlowError):
    """psi reached zero: the run stops and reports the time instead of crashing."""


# ---------------------------------------------------------------------------
# grids


@dataclass(frozen=True)
class Grid2D:
    """N x N grid on [origin, origin + L)^2 with spacing h = L / N.

    ``boundary`` is "periodic" or "dirichlet"; Dirichlet grids take their
    edge values from ``exact(x, y, t)`` at every stage.
    """

    N: int
    L: float
    origin: float = 0.0
    boundary: str = "periodic"
    exact: Callable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.N < 8 or self.N & (self.N - 1):
            raise ValueError("N must be a power of two, at least 8")
        if self.boundary not in ("periodic", "dirichlet"):
            raise ValueError("boundary must be periodic or dirichlet")
        if self.boundary == "dirichlet" and self.exact is None:
            raise ValueError("a dirichlet grid needs exact boundary data")

    @property
    def h(self) -> float:
        return self.L / self.N

    def coords(self):
        c = self.origin + self.h * np.arange(self.N)
        return np.meshgrid(c, c, indexing="ij")

    def sample(self, f, t=0.0) -> np.ndarray:
        X, Y = self.coords()
        return np.asarray(f(X, Y, t), dtype=float) * np.ones_like(X)


@dataclass(frozen=True)
class Grid1D:
    """M points in s on [origin, origin + S]; ``boundary`` in periodic | reflecting | pole.

    Periodic grids exclude the right endpoint.  Pole grids pin psi = 0 at
    both ends and only evolve interior points.
    """

    M: int
    S: float
    boundary: str = "periodic"
    origin: float = 0.0

    def __post_init__(self):
        if self.M < 16:
            raise ValueError("M must be at least 16")
        if self.boundary not in ("periodic", "reflecting", "pole"):
            raise ValueError("boundary must be periodic, reflecting or pole")

    @property
    def h(self) -> float:
        return self.S / self.M if self.boundary == "periodic" else self.S / (self.M - 1)

    def coords(self) -> np.ndarray:
        return self.origin + self.h * np.arange(self.M)


@dataclass(frozen=True)
class FlowRun:
    """Value-semantic solver state.

    ``u`` holds the current field; ``aux`` the previous level (surface
    leapfrog) or the time derivative (warped hyperbolic).
    """

    kind: FlowKind
    geometry: str  # "surface" or "warped"
    grid: object
    dt: float
    time: float
    u: np.ndarray
    aux: np.ndarray | None = None
    n: int = 1
    steps: int = 0

    def stable_dt(self) -> float:
        return stable_dt(self.kind, self.geometry, self.grid, self.u)


def stable_dt(kind, geometry, grid, u) -> float:
    kind = FlowKind.parse(kind)
    h = grid.h
    if geometry == "surface":
        m = float(np.min(u))
        if kind is FlowKind.RICCI:
            return RICCI_DT_FACTOR * h * h * m
        return WAVE_DT_FACTOR * h * math.sqrt(m)
    if kind is FlowKind.RICCI:
        return WARPED_DT_FACTOR * h * h
    return WARPED_DT_FACTOR * h


# ---------------------------------------------------------------------------
# surface flows


def laplacian_periodic(f: np.ndarray, h: float) -> np.ndarray:
    return (
        np.roll(f, 1, 0) + np.roll(f, -1, 0) + np.roll(f, 1, 1) + np.roll(f, -1, 1) - 4.0 * f
    ) / (h * h)


def _apply_boundary(grid: Grid2D, u: np.ndarray, t: float) -> np.ndarray:
    if grid.boundary == "periodic":
        return u
    c = grid.origin + grid.h * np.arange(grid.N)
    lo, hi = c[0], c[-1]
    u = u.copy()
    u[0, :] = grid.exact(lo, c, t)
    u[-1, :] = grid.exact(hi, c, t)
    u[:, 0] = grid.exact(c, lo, t)
    u[:, -1] = grid.exact(c, hi, t)
    return u


def _surface_rhs(grid: Grid2D, u: np.ndarray) -> np.ndarray:
    r = laplacian_periodic(np.log(u), grid.h)
    if grid.boundary == "dirichlet":
        r[0, :] = r[-1, :] = r[:, 0] = r[:, -1] = 0.0
    return r


def _check_field(u, t, positive=True):
    bad = ~np.isfinite(u)
    if positive:
        bad |= u <= 0
    if bad.any():
        idx = tuple(int(i) for i in np.argwhere(bad)[0])
        what = "non-finite value" if not np.isfinite(u[idx]) else "non-positive conformal factor"
        raise FlowError(f"{what} at t={t:.6g}, index {idx}", t, idx)


def start_surface(kind, grid: Grid2D, u0, v0=None, dt=None, t0=0.0) -> FlowRun:
    """Initial state; ``dt=None`` picks the declared stability bound."""
    kind = FlowKind.parse(kind)
    u0 = np.array(u0, dtype=float)
    _check_field(u0, t0)
    limit = stable_dt(kind, "surface", grid, u0)
    dt = limit if dt is None else float(dt)
    if dt > limit * (1 + 1e-12):
        raise ValueError(f"dt={dt:.3g} exceeds the stability bound {limit:.3g}")
    aux = None
    if kind is FlowKind.HYPERBOLIC:
        v0 = np.zeros_like(u0) if v0 is None else np.asarray(v0, dtype=float)
        u1 = u0 + dt * v0 + 0.5 * dt * dt * _surface_rhs(grid, u0)
        u1 = _apply_boundary(grid, u1, t0 + dt)
        # leapfrog keeps (previous, current); the first step is already taken
        return FlowRun(kind, "surface", grid, dt, t0 + dt, u1, u0, steps=1)
    return FlowRun(kind, "surface", grid, dt, t0, u0, aux)


def step_surface(run: FlowRun) -> FlowRun:
    g, dt, t = run.grid, run.dt, run.time
    if run.kind is FlowKind.RICCI:
        u = run.u
        k1 = _surface_rhs(g, u)
        u2 = _apply_boundary(g, u + 0.5 * dt * k1, t + 0.5 * dt)
        k2 = _surface_rhs(g, u2)
        u3 = _apply_boundary(g, u + 0.5 * dt * k2, t + 0.5 * dt)
        k3 = _surface_rhs(g, u3)
        u4 = _apply_boundary(g, u + dt * k3, t + dt)
        k4 = _surface_rhs(g, u4)
        new = u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        new = _apply_boundary(g, new, t + dt)
        _check_field(new, t + dt)
        return replace(run, u=new, time=t + dt, steps=run.steps + 1)
    new = 2.0 * run.u - run.aux + dt * dt * _surface_rhs(g, run.u)
    new = _apply_boundary(g, new, t + dt)
    _check_field(new, t + dt)
    return replace(run, u=new, aux=run.u, time=t + dt, steps=run.steps + 1)


def advance(run: FlowRun, T: float, step=None, callback=None) -> FlowRun:
    """Step until ``run.time`` reaches T (the last step is shortened)."""
    step = step or (step_surface if run.geometry == "surface" else step_warped)
    while run.time < T - 1e-12 * max(1.0, T):
        if run.geometry == "surface" and run.kind is FlowKind.HYPERBOLIC:
            # leapfrog needs a uniform step; T must be a multiple of dt
            nxt = step(run)
        else:
            dt = min(run.dt, T - run.time)
            nxt = replace(step(replace(run, dt=dt)), dt=run.dt)
        if callback:
            callback(run, nxt)
        run = nxt
    return run


def solve_surface(kind, grid, u0, T, v0=None, dt=None, callback=None) -> FlowRun:
    """Run to T with a uniform step that divides T exactly."""
    kind = FlowKind.parse(kind)
    limit = stable_dt(kind, "surface", grid, u0) if dt is None else float(dt)
    steps = max(1, math.ceil(T / limit - 1e-9))
    run = start_surface(kind, grid, u0, v0=v0, dt=T / steps)
    return advance(run, T, callback=callback)


def scalar_curvature(grid: Grid2D, u: np.ndarray) -> np.ndarray:
    return -laplacian_periodic(np.log(u), grid.h) / u


# ---------------------------------------------------------------------------
# warped flows


def _pad(grid: Grid1D, f: np.ndarray):
    """(f_minus, f_plus) neighbours under the boundary rule."""
    if grid.boundary == "periodic":
        return np.roll(f, 1), np.roll(f, -1)
    fm = np.empty_like(f)
    fp = np.empty_like(f)
    fm[1:], fp[:-1] = f[:-1], f[1:]
    # mirror ghost points; pole ends are overwritten afterwards
    fm[0], fp[-1] = f[1], f[-2]
    return fm, fp


def _warped_terms(grid: Grid1D, n: int, psi: np.ndarray):
    h = grid.h
    pm, pp = _pad(grid, psi)
    ps = (pp - pm) / (2 * h)
    pss = (pp - 2 * psi + pm) / (h * h)
    with np.errstate(divide="ignore", invalid="ignore"):
        curv = (n - 1) * (1 - ps * ps) / psi
    if grid.boundary == "pole":
        curv[0] = curv[-1] = 0.0
    return pss - curv


def _warped_rhs(run: FlowRun, psi, vel):
    # a stage outside psi > 0 means the step straddles the singular time
    _check_psi(run.grid, psi, run.time)
    base = _warped_terms(run.grid, run.n, psi)
    if run.kind is FlowKind.RICCI:
        out = base
        if run.grid.boundary == "pole":
            out = out.copy()
            out[0] = out[-1] = 0.0
        return out, None
    acc = base - vel * vel / psi
    if run.grid.boundary == "pole":
        acc = acc.copy()
        acc[0] = acc[-1] = 0.0
        vel = vel.copy()
        vel[0] = vel[-1] = 0.0
    return vel, acc


def _check_psi(grid, psi, t):
    core = psi[1:-1] if grid.boundary == "pole" else psi
    bad = ~np.isfinite(core) | (core <= 0)
    if bad.any():
        i = int(np.argwhere(bad)[0][0]) + (1 if grid.boundary == "pole" else 0)
        raise SingularTime(f"singular time reached at t={t:.6g} (psi <= 0 at index {i})", t, i)


def start_warped(kind, n: int, grid: Grid1D, psi0, v0=None, dt=None, t0=0.0) -> FlowRun:
    kind = FlowKind.parse(kind)
    psi0 = np.array(psi0, dtype=float)
    if grid.boundary == "pole":
        psi0[0] = psi0[-1] = 0.0
    _check_psi(grid, psi0, t0)
    limit = stable_dt(kind, "warped", grid, psi0)
    dt = limit if dt is None else float(dt)
    if dt > limit * (1 + 1e-12):
        raise ValueError(f"dt={dt:.3g} exceeds the stability bound {limit:.3g}")
    aux = None
    if kind is FlowKind.HYPERBOLIC:
        aux = np.zeros_like(psi0) if v0 is None else np.array(v0, dtype=float) * np.ones_like(psi0)
    return FlowRun(kind, "warped", grid, dt, t0, psi0, aux, n=int(n))


def step_warped(run: FlowRun) -> FlowRun:
    dt, t = run.dt, run.time
    try:
        if run.kind is FlowKind.RICCI:
            p = run.u
            k1, _ = _warped_rhs(run, p, None)
            k2, _ = _warped_rhs(run, p + 0.5 * dt * k1, None)
            k3, _ = _warped_rhs(run, p + 0.5 * dt * k2, None)
            k4, _ = _warped_rhs(run, p + dt * k3, None)
            new = p + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            _check_psi(run.grid, new, t + dt)
            return replace(run, u=new, time=t + dt, steps=run.steps + 1)
        p, v = run.u, run.aux
        a1, b1 = _warped_rhs(run, p, v)
        a2, b2 = _warped_rhs(run, p + 0.5 * dt * a1, v + 0.5 * dt * b1)
        a3, b3 = _warped_rhs(run, p + 0.5 * dt * a2, v + 0.5 * dt * b2)
        a4, b4 = _warped_rhs(run, p + dt * a3, v + dt * b3)
        newp = p + dt / 6 * (a1 + 2 * a2 + 2 * a3 + a4)
        newv = v + dt / 6 * (b1 + 2 * b2 + 2 * b3 + b4)
        _check_psi(run.grid, newp, t + dt)
        return replace(run, u=newp, aux=newv, time=t + dt, steps=run.steps + 1)
    except FloatingPointError as exc:  # pragma: no cover - numpy default does not raise
        raise SingularTime(f"singular time reached near t={t:.6g}: {exc}", t) from exc


@dataclass
class WarpedOutcome:
    run: FlowRun
    singular: bool = False
    message: str = ""


def solve_warped(kind, n, grid, psi0, T, v0=None, dt=None) -> WarpedOutcome:
    kind = FlowKind.parse(kind)
    limit = stable_dt(kind, "warped", grid, psi0) if dt is None else float(dt)
    steps = max(1, math.ceil(T / limit - 1e-9))
    last = [start_warped(kind, n, grid, psi0, v0=v0, dt=T / steps)]
    try:
        run = advance(last[0], T, callback=lambda _, nxt: last.__setitem__(0, nxt))
    except SingularTime as exc:
        # last valid state before psi left the positive range
        return WarpedOutcome(last[0], True, str(exc))
    return WarpedOutcome(run)


# ---------------------------------------------------------------------------
# initial data


def random_fourier(seed: int, L: float, modes: int = 3, amplitude: float = 0.4):
    """Smooth positive periodic function on [0, L)^2 (callable of x, y, t)."""
    rng = np.random.default_rng(seed)
    ks = rng.integers(-modes, modes + 1, size=(6, 2))
    amps = rng.uniform(-1, 1, size=6)
    amps *= amplitude / max(np.abs(amps).sum(), 1e-12)
    phases = rng.uniform(0, 2 * np.pi, size=6)

    def f(x, y, t=0.0):
        out = np.ones_like(np.asarray(x, dtype=float) + np.asarray(y, dtype=float))
        for (kx, ky), a, p in zip(ks, amps, phases):
            out = out + a * np.cos(2 * np.pi * (kx * x + ky * y) / L + p)
        return out

    return f


def cigar(x, y, t):
    return 1.0 / (x * x + y * y + np.exp(4.0 * t))


def cigar_grid(N: int, L: float = 8.0) -> Grid2D:
    return Grid2D(N, L, origin=-L / 2, boundary="dirichlet", exact=cigar)


# ---------------------------------------------------------------------------
# equivariance


@dataclass
class EquivarianceReport:
    kind: str
    group: str
    eps: float
    T: float
    discrepancy: float
    detail: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "group": self.group,
            "eps": self.eps,
            "T": self.T,
            "discrepancy": self.discrepancy,
            **self.detail,
        }


class GroupGridError(ValueError):
    pass


def _rel(a, b) -> float:
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def equivariance_check(kind, group: str, eps: float, initial: Grid2D, T: float, u0=None, v0=None, dt=None):
    """Compare evolve-then-transform against transform-then-evolve.

    ``initial`` fixes the grid; ``u0`` is a callable (x, y, t) -> u giving
    the initial slice (G6 resamples it on a grid twice as long).
    """
    kind = FlowKind.parse(kind)
    grid = initial
    f = u0 if u0 is not None else (grid.exact if grid.exact is not None else None)
    if f is None:
        raise ValueError("equivariance_check needs initial data as a callable")
    U0 = grid.sample(f, 0.0)
    V0 = None if v0 is None else grid.sample(v0, 0.0)
    N, h = grid.N, grid.h
    base_dt = dt or stable_dt(kind, "surface", grid, U0)

    def run(g, u, v, T_, dt_):
        steps = max(1, math.ceil(T_ / dt_ - 1e-9))
        r = start_surface(kind, g, u, v0=v, dt=T_ / steps)
        return advance(r, T_).u

    if group in ("G2", "G3"):
        if grid.boundary != "periodic":
            raise GroupGridError("translations need a periodic grid")
        k = eps / h
        if abs(k - round(k)) > 1e-9:
            adm = ", ".join(f"{j}h={j * h:g}" for j in range(1, min(N, 6)))
            raise GroupGridError(f"eps must be a multiple of h={h:g} (admissible: {adm}, ...)")
        k, axis = int(round(k)), 0 if group == "G2" else 1
        a = np.roll(run(grid, U0, V0, T, base_dt), k, axis)
        b = run(grid, np.roll(U0, k, axis), None if V0 is None else np.roll(V0, k, axis), T, base_dt)
        return EquivarianceReport(kind.value, group, eps, T, _rel(b, a), {"shift_cells": k})
    if group == "G1":
        if grid.boundary != "periodic":
            raise GroupGridError("time translation is checked on periodic grids")
        a = run(grid, U0, V0, T, base_dt)
        steps = max(1, math.ceil(T / base_dt - 1e-9))
        r = start_surface(kind, grid, U0, v0=V0, dt=T / steps, t0=eps)
        b = advance(r, eps + T).u
        return EquivarianceReport(kind.value, group, eps, T, _rel(b, a))
    if group == "G4":
        s = math.exp(eps)
        amp = s if kind is FlowKind.RICCI else s * s
        g2 = grid
        if grid.boundary == "dirichlet":
            ex = grid.exact
            g2 = replace(grid, exact=lambda x, y, t: amp * ex(x, y, t / s))
        a = amp * run(grid, U0, V0, T, base_dt)
        b = run(g2, amp * U0, None if V0 is None else s * V0, s * T, s * base_dt)
        return EquivarianceReport(kind.value, group, eps, T, _rel(b, a), {"time_scale": s, "amplitude": amp})
    if group == "G5":
        q = eps / (math.pi / 2)
        if abs(q - round(q)) > 1e-9:
            raise GroupGridError("only quarter turns are admissible: eps in {pi/2, pi, 3pi/2}")
        if grid.boundary != "periodic":
            raise GroupGridError("rotations are checked on periodic grids")
        k = int(round(q)) % 4
        a = np.rot90(run(grid, U0, V0, T, base_dt), k)
        b = run(grid, np.rot90(U0, k), None if V0 is None else np.rot90(V0, k), T, base_dt)
        return EquivarianceReport(kind.value, group, eps, T, _rel(b, a), {"quarter_turns": k})
    if group == "G6":
        if abs(eps - math.log(2)) > 1e-12:
            raise GroupGridError("spatial dilation is checked only for eps = ln 2")
        if grid.boundary != "periodic":
            raise GroupGridError("dilation is checked on periodic grids")
        big = Grid2D(2 * N, 2 * grid.L, grid.origin * 2, "periodic")
        fb = lambda x, y, t: f(x / 2, y / 2, t) / 4  # noqa: E731
        Ub = big.sample(fb, 0.0)
        Vb = None if v0 is None else big.sample(lambda x, y, t: v0(x / 2, y / 2, t) / 4, 0.0)
        d = min(base_dt, stable_dt(kind, "surface", big, Ub))
        a = run(grid, U0, V0, T, d) / 4
        b = run(big, Ub, Vb, T, d)[::2, ::2]
        return EquivarianceReport(kind.value, group, eps, T, _rel(b, a), {"fine_points": 2 * N})
    raise GroupGridError(f"unknown group {group!r}")


# ---------------------------------------------------------------------------
# residual probe


def _diff(f, axis, count, h):
    if count == 0:
        return f
    if count == 1:
        return (np.roll(f, -1, axis) - np.roll(f, 1, axis)) / (2 * h)
    if count == 2:
        return (np.roll(f, -1, axis) - 2 * f + np.roll(f, 1, axis)) / (h * h)
    raise ValueError("only derivatives up to order two per axis")


@lru_cache(maxsize=32)
def _probe_function(pde, coords: tuple):
    syms = list(pde.spec.variables) + [pde.spec.u] + list(coords)
    return sp.lambdify(syms, pde.delta, "numpy")


def residual_probe(levels, pde, spacing, dt, origin=0.0, t_mid=0.0) -> float:
    """max |delta| over interior points of the middle of three time levels.

    ``levels`` has shape (3, *spatial) and holds the dependent variable of
    ``pde`` (w for surface equations, psi for warped ones) at t_mid - dt,
    t_mid, t_mid + dt.  The last independent variable of ``pde`` is time.
    """
    spec = pde.spec
    levels = np.asarray(levels, dtype=float)
    nsp = spec.p - 1
    if levels.shape[0] != 3 or levels.ndim != nsp + 1:
        raise ValueError("levels must have shape (3, *spatial)")
    mid = levels[1]
    shape = mid.shape
    grids = np.meshgrid(*[origin + spacing * np.arange(m) for m in shape], indexing="ij")
    values = {}
    coords = spec.jet_coords_in(pde.delta)
    for sym, J in coords.items():
        if not J:
            continue
        counts = [J.count(k) for k in range(spec.p)]
        ct = counts[-1]
        if ct == 0:
            base = mid
        elif ct == 1:
            base = (levels[2] - levels[0]) / (2 * dt)
        else:
            base = (levels[2] - 2 * levels[1] + levels[0]) / (dt * dt)
        for ax in range(nsp):
            base = _diff(base, ax, counts[ax], spacing)
        values[sym] = base
    order = sorted(values, key=str)
    fn = _probe_function(pde, tuple(order))
    args = list(grids) + [np.full(shape, t_mid)] + [mid] + [values[s] for s in order]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.asarray(fn(*args), dtype=float) * np.ones(shape)
    inner = tuple(slice(1, -1) for _ in range(nsp))
    return float(np.max(np.abs(r[inner])))


# ---------------------------------------------------------------------------
# output formats

SNAPSHOT_MAGIC = b"GFLW"
SNAPSHOT_VERSION = 1


def write_snapshot(path, u: np.ndarray):
    """Little-endian: magic, u32 version, u32 N, then N*N f64 row-major."""
    u = np.ascontiguousarray(u, dtype="<f8")
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("snapshots hold square grids")
    with open(path, "wb") as fh:
        fh.write(SNAPSHOT_MAGIC + struct.pack("<II", SNAPSHOT_VERSION, u.shape[0]))
        fh.write(u.tobytes(order="C"))


def read_snapshot(path) -> np.ndarray:
    with open(path, "rb") as fh:
        head = fh.read(12)
        if len(head) != 12 or head[:4] != SNAPSHOT_MAGIC:
            raise ValueError("not a flow snapshot")
        version, N = struct.unpack("<II", head[4:])
        if version != SNAPSHOT_VERSION:
            raise ValueError(f"unsupported snapshot version {version}")
        data = np.frombuffer(fh.read(), dtype="<f8")
    if data.size != N * N:
        raise ValueError("truncated snapshot")
    return data.reshape(N, N).copy()
