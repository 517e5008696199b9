"""Graph-constrained vector autoregressions: VAR(p, G).

A missing directed edge ``a -> b`` forces ``phi[u][b, a] == 0`` for every lag
``u``; a missing undirected edge ``a -- b`` forces the concentration matrix
``inv(sigma)`` to vanish at ``(a, b)``. Own lags are always allowed.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from ..errors import EstimationError, ModelError
from ..graph import MixedGraph

__all__ = [
    "TimeSeries",
    "VarModel",
    "Violation",
    "validate_var",
    "companion_matrix",
    "power_iteration_radius",
    "is_stationary",
    "random_var",
    "simulate_var",
    "fit_var",
    "lag_matrix",
]

PHI_TOL = 1e-12
K_TOL = 1e-8
PD_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Observations in rows, one column per labelled component."""

    labels: tuple
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data, dtype=float)
        if data.ndim != 2 or data.shape[0] < 1:
            raise ValueError("data must be a nonempty 2-d array")
        if data.shape[1] != len(self.labels):
            raise ValueError("one label per column required")
        if not np.all(np.isfinite(data)):
            raise ValueError("data must be finite")
        object.__setattr__(self, "labels", tuple(str(v) for v in self.labels))
        object.__setattr__(self, "data", data)

    def __len__(self):
        return self.data.shape[0]

    def __eq__(self, other):
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.data, other.data)

    def columns(self, labels) -> list:
        """Column indices for ``labels`` (strings or ints)."""
        pos = {v: i for i, v in enumerate(self.labels)}
        try:
            return [pos[str(v)] for v in labels]
        except KeyError as exc:
            raise ValueError(f"unknown series label {exc.args[0]!r}") from None

    def select(self, labels) -> "TimeSeries":
        labels = [str(v) for v in labels]
        return TimeSeries(tuple(labels), self.data[:, self.columns(labels)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(self.labels) + "\n")
        for row in self.data:
            buf.write(",".join("%.10g" % x for x in row) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TimeSeries":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) < 2:
            raise ValueError("CSV needs a header and at least one row")
        labels = tuple(s.strip() for s in lines[0].split(","))
        data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]])
        return cls(labels, data)


@dataclass(frozen=True, eq=False)
class VarModel:
    """``X(t) = sum_u phi[u-1] @ X(t-u) + eps(t)``, ``eps ~ N(0, sigma)``.

    ``phi`` has shape ``(p, d, d)``; ``phi[u-1][b, a]`` is the coefficient of
    ``X_a(t-u)`` in the equation for ``X_b(t)``.
    """

    vertices: tuple
    phi: np.ndarray
    sigma: np.ndarray

    def __post_init__(self):
        phi = np.array(self.phi, dtype=float)
        sigma = np.array(self.sigma, dtype=float)
        d = len(self.vertices)
        if phi.ndim == 2:
            phi = phi[None]
        if phi.ndim != 3 or phi.shape[0] < 1 or phi.shape[1:] != (d, d):
            raise ModelError(f"phi must have shape (p, {d}, {d}), got {phi.shape}")
        if sigma.shape != (d, d):
            raise ModelError(f"sigma must have shape ({d}, {d}), got {sigma.shape}")
        if not (np.all(np.isfinite(phi)) and np.all(np.isfinite(sigma))):
            raise ModelError("parameters must be finite")
        if not np.allclose(sigma, sigma.T, rtol=0, atol=1e-12):
            raise ModelError("sigma must be symmetric")
        if np.linalg.eigvalsh(sigma).min() <= PD_TOL:
            raise ModelError("sigma must be positive definite")
        phi.setflags(write=False)
        sigma.setflags(write=False)
        object.__setattr__(self, "vertices", tuple(str(v) for v in self.vertices))
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "sigma", sigma)

    @property
    def order(self) -> int:
        return self.phi.shape[0]

    @property
    def dim(self) -> int:
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, VarModel):
            return NotImplemented
        return (
            self.vertices == other.vertices
            and np.array_equal(self.phi, other.phi)
            and np.array_equal(self.sigma, other.sigma)
        )

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "order": self.order,
            "phi": [m.tolist() for m in self.phi],
            "sigma": self.sigma.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "VarModel":
        try:
            model = cls(tuple(d["vertices"]), np.array(d["phi"], dtype=float), d["sigma"])
        except KeyError as exc:
            raise ModelError(f"model JSON lacks field {exc.args[0]!r}") from None
        if "order" in d and int(d["order"]) != model.order:
            raise ModelError("'order' does not match the number of phi matrices")
        return model

    @classmethod
    def from_json(cls, text: str) -> "VarModel":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class Violation:
    """A model parameter that breaks a zero constraint of the graph."""

    kind: str  # "directed" or "undirected"
    source: str
    target: str
    lag: int | None
    value: float

    def __str__(self):
        if self.kind == "directed":
            return (
                f"missing edge {self.source} -> {self.target}: "
                f"phi[{self.lag}][{self.target},{self.source}] = {self.value:.6g}"
            )
        return (
            f"missing edge {self.source} -- {self.target}: "
            f"K[{self.source},{self.target}] = {self.value:.6g}"
        )


def _graph_positions(model: VarModel, g: MixedGraph):
    if set(model.vertices) != {str(v) for v in g.labels}:
        raise ModelError("model vertices differ from graph vertices")
    return [g.index(v) for v in model.vertices]


def validate_var(model: VarModel, g: MixedGraph) -> list:
    """Zero-pattern violations of ``model`` with respect to ``g`` (empty when valid)."""
    gid = _graph_positions(model, g)
    try:
        K = np.linalg.inv(model.sigma)
    except np.linalg.LinAlgError:
        raise ModelError("sigma is singular") from None
    out = []
    d = model.dim
    for b in range(d):
        for a in range(d):
            if a == b:
                continue
            if gid[a] not in g.pa_ids(gid[b]):
                for u in range(model.order):
                    val = model.phi[u, b, a]
                    if abs(val) > PHI_TOL:
                        out.append(
                            Violation("directed", model.vertices[a], model.vertices[b], u + 1, float(val))
                        )
            if a < b and gid[a] not in g.ne_ids(gid[b]) and abs(K[a, b]) > K_TOL:
                out.append(
                    Violation("undirected", model.vertices[a], model.vertices[b], None, float(K[a, b]))
                )
    return out


def companion_matrix(phi: np.ndarray) -> np.ndarray:
    """``(p*d, p*d)`` companion matrix of a VAR(p)."""
    phi = np.asarray(phi, dtype=float)
    p, d, _ = phi.shape
    top = np.concatenate(list(phi), axis=1)
    if p == 1:
        return top
    bottom = np.eye((p - 1) * d, p * d)
    return np.vstack([top, bottom])


def power_iteration_radius(M: np.ndarray, iters: int = 500, tol: float = 1e-9) -> float:
    """Spectral radius estimate by power iteration from the all-ones vector.

    Uses the two-step growth ratio ``sqrt(|M^2 x| / |x|)`` so that a dominant
    real pair ``+r, -r`` still converges. Complex dominant pairs and defective
    eigenvalues converge slowly; use ``numpy.linalg.eigvals`` when exactness
    matters.
    """
    x = np.ones(M.shape[0])
    x /= np.linalg.norm(x)
    est = 0.0
    for _ in range(iters):
        y = M @ (M @ x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        new = np.sqrt(ny)
        x = y / ny
        if abs(new - est) < tol:
            return float(new)
        est = new
    return float(est)


def is_stationary(model: VarModel, margin: float = 1e-6):
    """``(stationary, spectral_radius)`` of the companion matrix."""
    M = companion_matrix(model.phi)
    radius = float(np.max(np.abs(np.linalg.eigvals(M)))) if M.size else 0.0
    return radius < 1.0 - margin, radius


def _allowed_mask(g: MixedGraph, labels) -> np.ndarray:
    gid = [g.index(v) for v in labels]
    d = len(gid)
    mask = np.eye(d, dtype=bool)
    for b in range(d):
        for a in range(d):
            if gid[a] in g.pa_ids(gid[b]):
                mask[b, a] = True
    return mask


def random_var(g: MixedGraph, p: int = 1, seed: int = 0, target_radius: float = 0.8) -> VarModel:
    """Random stationary member of VAR(p, g), deterministic in ``seed``.

    Allowed coefficients are uniform on [-1, 1] and shrunk by a common factor
    until the spectral radius is at most ``target_radius``. The concentration
    matrix is the identity with +-0.3 on allowed undirected pairs, shifted
    along the diagonal if needed to keep its smallest eigenvalue at 0.05.
    """
    if not 0 < target_radius < 1:
        raise ModelError("target_radius must lie in (0, 1)")
    if p < 1:
        raise ModelError("order must be positive")
    rng = np.random.default_rng(seed)
    labels = [str(v) for v in g.labels]
    d = len(labels)
    mask = _allowed_mask(g, labels)
    phi = rng.uniform(-1.0, 1.0, size=(p, d, d)) * mask

    radius = is_stationary(VarModel(labels, phi, np.eye(d)))[1]
    for _ in range(1000):
        if radius <= target_radius:
            break
        phi *= min(0.99, (target_radius / radius) ** (1.0 / p))
        radius = is_stationary(VarModel(labels, phi, np.eye(d)))[1]
    else:
        raise ModelError("could not shrink coefficients to the target radius")

    K = np.eye(d)
    for a, b in g.undirected_pairs():
        i, j = labels.index(str(a)), labels.index(str(b))
        K[i, j] = K[j, i] = 0.3 * rng.choice((-1.0, 1.0))
    for _ in range(100):
        lam = np.linalg.eigvalsh(K).min()
        if lam >= 0.05 - 1e-12:
            break
        K += (0.05 - lam + 1e-12) * np.eye(d)
    else:
        raise ModelError("could not build a positive definite concentration matrix")
    sigma = np.linalg.inv(K)
    sigma = (sigma + sigma.T) / 2
    return VarModel(labels, phi, sigma)


def simulate_var(model: VarModel, n: int, burnin: int = 1000, seed: int = 0) -> TimeSeries:
    """Gaussian simulation from a zero initial state; the first ``burnin`` rows are dropped."""
    stationary, radius = is_stationary(model)
    if not stationary:
        raise ModelError(f"model is not stationary (spectral radius {radius:.6g})")
    if n < 1 or burnin < 0:
        raise ModelError("need n >= 1 and burnin >= 0")
    try:
        chol = np.linalg.cholesky(model.sigma)
    except np.linalg.LinAlgError:
        raise ModelError("sigma is not positive definite") from None
    rng = np.random.default_rng(seed)
    total = burnin + n
    eps = rng.standard_normal((total, model.dim)) @ chol.T
    p = model.order
    x = np.zeros((total + p, model.dim))
    for t in range(total):
        acc = eps[t].copy()
        for u in range(p):
            acc += model.phi[u] @ x[t + p - 1 - u]
        x[t + p] = acc
    return TimeSeries(model.vertices, x[p + burnin:])


def lag_matrix(data: np.ndarray, p: int) -> np.ndarray:
    """Rows ``t = p..n-1`` of ``[X(t-1), ..., X(t-p)]`` (lag-major column blocks)."""
    n = data.shape[0]
    return np.hstack([data[p - u: n - u] for u in range(1, p + 1)])


def fit_var(series: TimeSeries, g: MixedGraph, p: int = 1) -> VarModel:
    """Equation-wise least squares under the directed zero pattern of ``g``.

    No intercept is fitted, matching the zero-mean model class. The
    concentration constraint is not imposed; check it with
    :func:`validate_var`.
    """
    labels = list(series.labels)
    if {str(v) for v in g.labels} != set(labels):
        raise EstimationError("series labels differ from graph vertices")
    d = len(labels)
    n = len(series)
    if n <= 10 * p * d:
        raise EstimationError(f"need more than {10 * p * d} observations, got {n}")
    mask = _allowed_mask(g, labels)
    Z = lag_matrix(series.data, p)
    Y = series.data[p:]
    phi = np.zeros((p, d, d))
    resid = np.empty_like(Y)
    for b in range(d):
        cols = [u * d + a for u in range(p) for a in range(d) if mask[b, a]]
        X = Z[:, cols]
        if np.linalg.matrix_rank(X) < X.shape[1]:
            raise EstimationError(f"rank-deficient design for equation {labels[b]}")
        coef, *_ = np.linalg.lstsq(X, Y[:, b], rcond=None)
        for c, k in zip(coef, cols):
            phi[k // d, b, k % d] = c
        resid[:, b] = Y[:, b] - X @ coef
    sigma = resid.T @ resid / resid.shape[0]
    sigma = (sigma + sigma.T) / 2
    try:
        return VarModel(labels, phi, sigma)
    except ModelError as exc:
        raise EstimationError(f"degenerate residual covariance: {exc}") from None
