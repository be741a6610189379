"""Complex linear algebra over tensor products of finite-dimensional subsystems.

Conventions
-----------
Subsystems are ordered row-major with the leftmost subsystem slowest: the
amplitude of basis state |j0 j1 ... j_{m-1}> sits at flat index
j0*(d1*...*d_{m-1}) + j1*(d2*...*d_{m-1}) + ... + j_{m-1}.  Every embedding
permutes the target subsystems to the front, applies the operator there and
permutes back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError

# Cap on the number of complex amplitudes a single state may hold.  Joint
# grid states (discrete dims times pointer samples) are the only consumers
# that get anywhere near it.
DEFAULT_AMPLITUDE_BUDGET = 2**26

_HERMITIAN_TOL = 1e-12
_PHASE_TOL = 1e-12


def _as_complex_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128)
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("amplitudes must be finite (no NaN/Inf)")
    return arr


def check_budget(num_amplitudes: int, budget: int | None = None) -> None:
    """Raise CapacityError if a state of this size exceeds the budget."""
    cap = DEFAULT_AMPLITUDE_BUDGET if budget is None else budget
    if num_amplitudes > cap:
        raise CapacityError(
            f"state of {num_amplitudes} amplitudes exceeds budget {cap}"
        )


@dataclass(frozen=True)
class StateVector:
    """Complex amplitude vector over an ordered list of finite subsystems.

    ``normalized`` marks unit-norm states; post-selection residuals carry
    ``normalized=False`` and a squared norm in (0, 1].
    """

    dims: tuple[int, ...]
    amps: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if any(d < 2 for d in dims):
            raise ValueError(f"subsystem dimensions must be >= 2, got {dims}")
        amps = _as_complex_array(self.amps).reshape(-1)
        expected = math.prod(dims) if dims else 1
        if amps.size != expected:
            raise ValueError(
                f"amplitude count {amps.size} does not match dims {dims}"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per subsystem."""
        shape = self.dims if self.dims else (1,)
        return self.amps.reshape(shape)


@dataclass(frozen=True)
class HermitianObservable:
    """Finite-dimensional Hermitian matrix.

    Hermiticity is enforced elementwise within 1e-12 at construction.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = _as_complex_array(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"observable must be square, got shape {m.shape}")
        if m.shape[0] < 2:
            raise ValueError("observable dimension must be >= 2")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > _HERMITIAN_TOL * scale:
            raise ValueError("matrix is not Hermitian within 1e-12")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def spectral_radius(self) -> float:
        evals, _ = eigendecomposition(self)
        return float(np.abs(evals).max())


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian positive semidefinite matrix with a declared trace weight.

    ``weight`` is the squared norm of the state the operator came from;
    sub-normalized post-selected branches have weight < 1.
    """

    matrix: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        m = _as_complex_array(self.matrix)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"density matrix must be square, got {m.shape}")
        scale = max(1.0, float(np.abs(m).max()))
        if np.abs(m - m.conj().T).max() > _HERMITIAN_TOL * scale:
            raise ValueError("density matrix is not Hermitian within 1e-12")
        tr = float(np.trace(m).real)
        if abs(tr - self.weight) > 1e-10 * max(1.0, abs(self.weight)):
            raise ValueError(
                f"trace {tr} deviates from declared weight {self.weight}"
            )
        if np.linalg.eigvalsh(m).min() < -1e-10 * scale:
            raise ValueError("density matrix is not positive semidefinite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def purity(self) -> float:
        return float(np.trace(self.matrix @ self.matrix).real)


# ---------------------------------------------------------------------------
# construction
# ---------------------------------------------------------------------------


def tensor_product(a: StateVector, b: StateVector,
                   budget: int | None = None) -> StateVector:
    """Kronecker product; a's subsystems become the leading (slow) ones."""
    check_budget(a.dim * b.dim, budget)
    return StateVector(
        a.dims + b.dims,
        np.kron(a.amps, b.amps),
        normalized=a.normalized and b.normalized,
    )


def bell_phi_plus() -> StateVector:
    """The two-qubit state (|00> + |11>)/sqrt(2)."""
    return max_entangled(2)


def max_entangled(n: int) -> StateVector:
    """Maximally entangled pair sum_j |j>|j> / sqrt(n) on dims [n, n]."""
    if n < 2:
        raise ValueError(f"pair dimension must be >= 2, got {n}")
    amps = np.zeros(n * n, dtype=np.complex128)
    amps[:: n + 1] = 1.0 / math.sqrt(n)
    return StateVector((n, n), amps)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dims != b.dims:
        raise ValueError(f"dims mismatch: {a.dims} vs {b.dims}")
    return complex(np.vdot(a.amps, b.amps))


# ---------------------------------------------------------------------------
# embedding, projection, reduction
# ---------------------------------------------------------------------------


def _validate_targets(dims: tuple[int, ...], targets) -> tuple[int, ...]:
    targets = tuple(int(t) for t in targets)
    if len(set(targets)) != len(targets):
        raise ValueError(f"targets must be distinct, got {targets}")
    for t in targets:
        if not 0 <= t < len(dims):
            raise IndexError(f"target {t} out of range for {len(dims)} subsystems")
    return targets


def apply_embedded(state: StateVector, op, targets) -> StateVector:
    """Apply a square matrix to the given subsystems, identity elsewhere."""
    targets = _validate_targets(state.dims, targets)
    op = _as_complex_array(op)
    d = math.prod(state.dims[t] for t in targets)
    if op.shape != (d, d):
        raise ValueError(
            f"operator shape {op.shape} does not match target dims product {d}"
        )
    n = len(state.dims)
    rest = [i for i in range(n) if i not in targets]
    perm = list(targets) + rest
    moved = state.tensor().transpose(perm).reshape(d, -1)
    out = (op @ moved).reshape([state.dims[p] for p in perm])
    out = out.transpose(np.argsort(perm)).reshape(-1)
    return StateVector(state.dims, out, normalized=state.normalized)


def project_onto(state: StateVector, targets,
                 chi: StateVector) -> tuple[StateVector, float]:
    """Contract <chi| onto the target subsystems.

    Returns the unnormalized residual on the remaining subsystems and the
    outcome probability (squared norm of the residual).
    """
    targets = _validate_targets(state.dims, targets)
    if chi.dims != tuple(state.dims[t] for t in targets):
        raise ValueError(
            f"chi dims {chi.dims} do not match target dims "
            f"{tuple(state.dims[t] for t in targets)}"
        )
    if abs(chi.norm - 1.0) > 1e-10:
        raise ValueError("post-selection state chi must be normalized")
    residual = np.tensordot(
        chi.tensor().conj(), state.tensor(),
        axes=(tuple(range(len(targets))), targets),
    )
    remaining = tuple(d for i, d in enumerate(state.dims) if i not in targets)
    out = StateVector(remaining, residual.reshape(-1), normalized=False)
    probability = float(np.vdot(out.amps, out.amps).real)
    return out, probability


def partial_trace(state: StateVector, keep) -> DensityOperator:
    """Reduced density operator on the ``keep`` subsystems (in given order)."""
    keep = _validate_targets(state.dims, keep)
    if not keep:
        raise ValueError("keep must be nonempty")
    n = len(state.dims)
    rest = [i for i in range(n) if i not in keep]
    k = math.prod(state.dims[i] for i in keep)
    m = state.tensor().transpose(list(keep) + rest).reshape(k, -1)
    rho = m @ m.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return DensityOperator(rho, weight=float(np.vdot(state.amps, state.amps).real))


# ---------------------------------------------------------------------------
# eigendecomposition (closed form for 2x2, cyclic Jacobi above)
# ---------------------------------------------------------------------------


def _phase_fix(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its first nonzero component is real positive."""
    out = vectors.copy()
    for i in range(out.shape[1]):
        col = out[:, i]
        idx = np.flatnonzero(np.abs(col) > _PHASE_TOL)
        if idx.size:
            lead = col[idx[0]]
            out[:, i] = col * (lead.conjugate() / abs(lead))
    return out


def _eig2(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = m[0, 0].real
    c = m[1, 1].real
    b = m[0, 1]
    if b == 0:
        evals = np.array([a, c])
        order = np.argsort(evals, kind="stable")
        return evals[order], np.eye(2, dtype=np.complex128)[:, order]
    half_diff = 0.5 * (a - c)
    rad = math.hypot(half_diff, abs(b))
    lo = 0.5 * (a + c) - rad
    hi = 0.5 * (a + c) + rad
    v_lo = np.array([b, lo - a])
    v_hi = np.array([b, hi - a])
    v = np.column_stack([v_lo / np.linalg.norm(v_lo),
                         v_hi / np.linalg.norm(v_hi)])
    return np.array([lo, hi]), v


def _jacobi(m: np.ndarray, off_threshold: float = 1e-14,
            max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi sweeps for a complex Hermitian matrix.

    Each rotation phases the (p, q) pivot to a real value and then applies
    the classical symmetric 2x2 rotation, accumulated into the eigenvector
    matrix.  Quadratic convergence makes 100 sweeps far more than enough at
    the dimensions (<= 8) this package uses.
    """
    a = m.copy()
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    threshold = off_threshold * max(1.0, float(np.linalg.norm(a)))
    for _ in range(max_sweeps):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) < threshold / (n * n):
                    continue
                phase = apq / abs(apq)
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * abs(apq))
                if tau >= 0:
                    t = 1.0 / (tau + math.hypot(1.0, tau))
                else:
                    t = -1.0 / (-tau + math.hypot(1.0, tau))
                cth = 1.0 / math.hypot(1.0, t)
                sth = t * cth
                rot = np.eye(n, dtype=np.complex128)
                rot[p, p] = cth
                rot[p, q] = sth
                rot[q, p] = -phase.conjugate() * sth
                rot[q, q] = phase.conjugate() * cth
                a = rot.conj().T @ a @ rot
                v = v @ rot
    evals = np.diag(a).real.copy()
    order = np.argsort(evals, kind="stable")
    return evals[order], v[:, order]


def eigendecomposition(obs: HermitianObservable) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns.

    Non-degenerate eigenvectors are phased so their first nonzero component
    is real positive; vectors inside a degenerate cluster are orthonormal
    but otherwise convention-free.
    """
    m = 0.5 * (obs.matrix + obs.matrix.conj().T)
    if obs.dim == 2:
        evals, vecs = _eig2(m)
    else:
        evals, vecs = _jacobi(m)
    return evals, _phase_fix(vecs)
