"""Adaptive structure-constrained low-rank coding by inexact ALM.

Decomposes X = X@Z + L@X + E where Z is a block-diagonal-leaning coding
matrix (nuclear norm + adaptively weighted L1), L extracts group-sparse
salient features (L2,1 norm), and E is sparse error (L1).  Splitting
variables J = Z, F = L, Q = Z, S = R and W = ones - R give closed-form
block updates; a single augmented Lagrangian ties them together.

Per-sweep update order is L, Z, E, R, then the splitting variables
J, F, Q, W, S: the Z update consumes the fresh L, while L, R consume the
previous sweep's Z, E, R and W, S respectively.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .errors import DimensionError, NumericalError
from .prox import column_l21_shrink, svt, thin_svd, weighted_shrink


@dataclass
class SolverConfig:
    alpha: float = 0.01
    beta: float = 0.01
    lam: float = 0.015
    mu0: float = 1e-6
    eta: float = 1.12
    mu_max: float = 1e10
    tol: float = 1e-6
    max_iter: int = 300
    seed: int = 0

    def __post_init__(self):
        if not (self.eta > 1):
            raise ValueError("eta must exceed 1")
        if not (0 < self.mu0 < self.mu_max):
            raise ValueError("need 0 < mu0 < mu_max")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        for name in ("alpha", "beta", "lam"):
            v = getattr(self, name)
            if not np.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0")


@dataclass
class AslrcState:
    Z: np.ndarray
    J: np.ndarray
    Q: np.ndarray
    R: np.ndarray
    S: np.ndarray
    W: np.ndarray
    L: np.ndarray
    F: np.ndarray
    E: np.ndarray
    Y1: np.ndarray
    Y2: np.ndarray
    Y3: np.ndarray
    Y4: np.ndarray
    Y5: np.ndarray
    Y6: np.ndarray
    mu: float
    iter: int = 0

    def check_shapes(self, d, N):
        expect = {
            "Z": (N, N), "J": (N, N), "Q": (N, N), "R": (N, N),
            "S": (N, N), "W": (N, N), "Y2": (N, N), "Y4": (N, N),
            "Y5": (N, N), "Y6": (N, N),
            "L": (d, d), "F": (d, d), "Y3": (d, d),
            "E": (d, N), "Y1": (d, N),
        }
        for name, shape in expect.items():
            got = getattr(self, name).shape
            if got != shape:
                raise DimensionError(f"state block {name}: {got}, expected {shape}")

    def blocks(self):
        return (self.Z, self.J, self.Q, self.R, self.S, self.W,
                self.L, self.F, self.E,
                self.Y1, self.Y2, self.Y3, self.Y4, self.Y5, self.Y6)


@dataclass
class TracePoint:
    iteration: int
    residual: float
    mu: float
    lagrangian: float


@dataclass
class Decomposition:
    Z_star: np.ndarray
    L_star: np.ndarray
    E_star: np.ndarray
    principal: np.ndarray  # X @ Z_star
    salient: np.ndarray    # L_star @ X
    trace: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0


def init_state(X, cfg=None):
    """All-zero starting point with mu = mu0."""
    cfg = cfg or SolverConfig()
    d, N = np.asarray(X).shape
    z = lambda *s: np.zeros(s)
    return AslrcState(
        Z=z(N, N), J=z(N, N), Q=z(N, N), R=z(N, N), S=z(N, N), W=z(N, N),
        L=z(d, d), F=z(d, d), E=z(d, N),
        Y1=z(d, N), Y2=z(N, N), Y3=z(d, d), Y4=z(N, N), Y5=z(N, N), Y6=z(N, N),
        mu=cfg.mu0,
    )


def _check_finite(state, iteration=None):
    for block in state.blocks():
        if not np.all(np.isfinite(block)):
            raise NumericalError("non-finite state block", iteration=iteration)


def _spd_solve(M, B):
    """Solve M @ X = B for symmetric positive-definite M.

    Falls back to a trace-scaled diagonal jitter if the Cholesky
    factorization fails from round-off.
    """
    M = 0.5 * (M + M.T)
    try:
        return cho_solve(cho_factor(M), B)
    except np.linalg.LinAlgError:
        jitter = 1e-12 * max(np.trace(M), 1.0)
        try:
            return cho_solve(cho_factor(M + jitter * np.eye(M.shape[0])), B)
        except np.linalg.LinAlgError as exc:
            raise NumericalError(f"SPD solve failed: {exc}") from exc


def update_L(state, X, cfg):
    """Minimize the Lagrangian over the projection L (a linear solve).

    L [2 beta (X - XR)(X - XR)' + mu (XX' + I)]
        = Y1 X' - Y3 + mu (X - XZ - E) X' + mu F
    """
    d = X.shape[0]
    XR = X @ state.R
    D = X - XR
    M = 2.0 * cfg.beta * (D @ D.T) + state.mu * (X @ X.T + np.eye(d))
    rhs = state.Y1 @ X.T - state.Y3 + state.mu * ((X - X @ state.Z - state.E) @ X.T) + state.mu * state.F
    # L M = rhs with M symmetric, so solve M L' = rhs'.
    return _spd_solve(M, rhs.T).T


def update_Z(state, X, zfactor=None):
    """Minimize the Lagrangian over Z; uses the freshly updated L.

    (2I + X'X) Z = (X'Y1 - Y2 - Y4)/mu + X'(X - LX - E) + J + Q
    """
    rhs = ((X.T @ state.Y1 - state.Y2 - state.Y4) / state.mu
           + X.T @ (X - state.L @ X - state.E) + state.J + state.Q)
    if zfactor is not None:
        return cho_solve(zfactor, rhs)
    N = X.shape[1]
    return _spd_solve(2.0 * np.eye(N) + X.T @ X, rhs)


def update_R(state, X, cfg):
    """Minimize the Lagrangian over the adaptive weights R.

    With A = [(LX)' ; ones']' so that A'A = (LX)'(LX) + ones*ones':
    (2 beta A'A + 2 mu I) R = 2 beta A'A - Y5 + Y6 + mu S + mu (ones - W)
    """
    N = X.shape[1]
    LX = state.L @ X
    AtA = LX.T @ LX + np.ones((N, N))
    M = 2.0 * cfg.beta * AtA + 2.0 * state.mu * np.eye(N)
    rhs = (2.0 * cfg.beta * AtA - state.Y5 + state.Y6
           + state.mu * state.S + state.mu * (np.ones((N, N)) - state.W))
    return _spd_solve(M, rhs)


def update_Q(state, cfg):
    """Weighted entrywise shrink of Z + Y4/mu; thresholds (alpha/mu) W.

    Negative W entries would make the threshold ill-posed, so they are
    clamped to zero (pass-through).
    """
    T = np.maximum((cfg.alpha / state.mu) * state.W, 0.0)
    return weighted_shrink(state.Z + state.Y4 / state.mu, T)


def update_W(state, cfg):
    """Weighted entrywise shrink of ones - R + Y6/mu; thresholds (alpha/mu)|Q|."""
    N = state.R.shape[0]
    target = np.ones((N, N)) - state.R + state.Y6 / state.mu
    return weighted_shrink(target, (cfg.alpha / state.mu) * np.abs(state.Q))


def update_J(state):
    """Nuclear-norm prox: singular value thresholding of Z + Y2/mu at 1/mu."""
    return svt(state.Z + state.Y2 / state.mu, 1.0 / state.mu)


def update_F(state):
    """L2,1 prox: column shrink of L + Y3/mu at 1/mu."""
    return column_l21_shrink(state.L + state.Y3 / state.mu, 1.0 / state.mu)


def update_S(state, cfg):
    """L2,1 prox: column shrink of R + Y5/mu at beta/mu."""
    return column_l21_shrink(state.R + state.Y5 / state.mu, cfg.beta / state.mu)


def update_E(state, X, cfg):
    """L1 prox: uniform shrink of X - XZ - LX + Y1/mu at lambda/mu."""
    target = X - X @ state.Z - state.L @ X + state.Y1 / state.mu
    return weighted_shrink(target, np.full(target.shape, cfg.lam / state.mu))


def _residual_blocks(state, X):
    N = X.shape[1]
    ones = np.ones((N, N))
    return (
        X - X @ state.Z - state.L @ X - state.E,
        state.Z - state.J,
        state.L - state.F,
        state.Z - state.Q,
        state.R - state.S,
        ones - state.W - state.R,
    )


def update_multipliers_and_mu(state, X, cfg):
    """Gradient-ascent multiplier step, then geometric mu growth."""
    r1, r2, r3, r4, r5, r6 = _residual_blocks(state, X)
    mu = state.mu
    state.Y1 = state.Y1 + mu * r1
    state.Y2 = state.Y2 + mu * r2
    state.Y3 = state.Y3 + mu * r3
    state.Y4 = state.Y4 + mu * r4
    state.Y5 = state.Y5 + mu * r5
    state.Y6 = state.Y6 + mu * r6
    state.mu = min(cfg.eta * mu, cfg.mu_max)
    state.iter += 1
    return state


def check_convergence(state, X, cfg):
    """Max entrywise-infinity norm over the six constraint residuals."""
    residual = max(np.max(np.abs(b)) if b.size else 0.0 for b in _residual_blocks(state, X))
    return residual < cfg.tol, float(residual)


def augmented_lagrangian(state, X, cfg):
    """Evaluate the full augmented Lagrangian at the current state."""
    _check_finite(state, state.iter)
    N = X.shape[1]
    LX = state.L @ X
    A = np.vstack([LX, np.ones((1, N))])
    r1, r2, r3, r4, r5, r6 = _residual_blocks(state, X)
    value = (
        thin_svd(state.J).singular_values.sum()
        + np.linalg.norm(state.F, axis=0).sum()
        + cfg.alpha * np.abs(state.W * state.Q).sum()
        + cfg.beta * (np.linalg.norm(A - A @ state.R, "fro") ** 2
                      + np.linalg.norm(state.S, axis=0).sum())
        + cfg.lam * np.abs(state.E).sum()
    )
    for Y, r in zip((state.Y1, state.Y2, state.Y3, state.Y4, state.Y5, state.Y6),
                    (r1, r2, r3, r4, r5, r6)):
        value += np.sum(Y * r) + 0.5 * state.mu * np.linalg.norm(r, "fro") ** 2
    return float(value)


def primal_sweep(state, X, cfg, zfactor=None):
    """One pass of block-coordinate updates at fixed multipliers and mu."""
    state.L = update_L(state, X, cfg)
    state.Z = update_Z(state, X, zfactor)
    state.E = update_E(state, X, cfg)
    state.R = update_R(state, X, cfg)
    state.J = update_J(state)
    state.F = update_F(state)
    state.Q = update_Q(state, cfg)
    state.W = update_W(state, cfg)
    state.S = update_S(state, cfg)
    return state


def solve(X, cfg=None, record_lagrangian=True, callback=None):
    """Run the full inexact-ALM loop and return the converged decomposition.

    Stops when the max constraint residual drops below cfg.tol or after
    cfg.max_iter sweeps (returned with converged=False, not an error).
    """
    cfg = cfg or SolverConfig()
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or not np.all(np.isfinite(X)):
        raise NumericalError("X must be a finite 2-D matrix")
    d, N = X.shape
    state = init_state(X, cfg)
    state.check_shapes(d, N)
    zfactor = cho_factor(2.0 * np.eye(N) + X.T @ X)

    trace = []
    converged = False
    for _ in range(cfg.max_iter):
        mu_k = state.mu
        primal_sweep(state, X, cfg, zfactor)
        _check_finite(state, state.iter)
        converged, residual = check_convergence(state, X, cfg)
        lag = augmented_lagrangian(state, X, cfg) if record_lagrangian else float("nan")
        trace.append(TracePoint(iteration=state.iter, residual=residual, mu=mu_k, lagrangian=lag))
        if callback is not None:
            callback(state, residual)
        update_multipliers_and_mu(state, X, cfg)
        if converged:
            break

    return Decomposition(
        Z_star=state.Z, L_star=state.L, E_star=state.E,
        principal=X @ state.Z, salient=state.L @ X,
        trace=trace, converged=converged, iterations=state.iter,
    )
