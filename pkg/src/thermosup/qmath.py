"""Dense complex linear algebra for finite-dimensional quantum systems.

Composite indices follow one global convention: factors listed left to
right are most to least significant in the composite index, i.e. the
composite basis state |i0, i1, ..., in> has index
i0 * (d1 * ... * dn) + i1 * (d2 * ... * dn) + ... + in.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

# Tolerances shared by the whole package.
HERMITIAN_ATOL = 1e-12
TRACE_ATOL = 1e-12
EIGENVALUE_FLOOR = -1e-10
UNITARY_ATOL = 1e-10


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product."""
    return np.asarray(a) @ np.asarray(b)


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, left factor most significant."""
    return np.kron(np.asarray(a), np.asarray(b))


def tensor(*factors: np.ndarray) -> np.ndarray:
    """Kronecker product of any number of factors, left to right."""
    if not factors:
        raise ValueError("tensor() needs at least one factor")
    out = np.asarray(factors[0])
    for f in factors[1:]:
        out = np.kron(out, np.asarray(f))
    return out


def is_unitary(u: np.ndarray, atol: float = UNITARY_ATOL) -> bool:
    """Whether u^dag u = I within atol (max entry deviation)."""
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    defect = u.conj().T @ u - np.eye(u.shape[0])
    return bool(np.max(np.abs(defect)) < atol)


def eigvals_hermitian(a: np.ndarray) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    return np.linalg.eigvalsh(np.asarray(a))


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-random unitary via QR of a Ginibre matrix with phase fix.

    ``seed`` may be an int or a ``numpy.random.Generator``; a fixed int
    seed gives a reproducible matrix.
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    rng = np.random.default_rng(seed) if not isinstance(seed, np.random.Generator) else seed
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def _check_dims(dim: int, dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise ValueError(f"invalid factor dimensions {dims}")
    if int(np.prod(dims)) != dim:
        raise ValueError(f"factor dimensions {dims} do not multiply to {dim}")
    return dims


def _check_keep(keep: Sequence[int], nfactors: int) -> tuple[int, ...]:
    keep = tuple(int(k) for k in keep)
    if len(set(keep)) != len(keep):
        raise ValueError(f"duplicate factor indices in keep={keep}")
    for k in keep:
        if not 0 <= k < nfactors:
            raise ValueError(f"factor index {k} out of range for {nfactors} factors")
    return keep


def partial_trace(rho: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Partial trace of an operator over all factors not in ``keep``.

    ``dims`` lists the factor dimensions and must multiply to the matrix
    dimension. The kept factors preserve their relative order. Keeping
    nothing returns the 1x1 matrix [[trace]].
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    dims = _check_dims(rho.shape[0], dims)
    n = len(dims)
    keep = tuple(sorted(_check_keep(keep, n)))
    traced = tuple(i for i in range(n) if i not in keep)
    kd = int(np.prod([dims[i] for i in keep])) if keep else 1
    td = int(np.prod([dims[i] for i in traced])) if traced else 1
    t = rho.reshape(dims + dims)
    perm = keep + traced + tuple(n + i for i in keep) + tuple(n + i for i in traced)
    t = t.transpose(perm).reshape(kd, td, kd, td)
    return np.trace(t, axis1=1, axis2=3)


def reduced_density(psi: np.ndarray, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Reduced density matrix of a pure state without forming the global one."""
    psi = np.asarray(psi).reshape(-1)
    dims = _check_dims(psi.shape[0], dims)
    n = len(dims)
    keep = tuple(sorted(_check_keep(keep, n)))
    rest = tuple(i for i in range(n) if i not in keep)
    kd = int(np.prod([dims[i] for i in keep])) if keep else 1
    a = psi.reshape(dims).transpose(keep + rest).reshape(kd, -1)
    return a @ a.conj().T


def embed_operator(op: np.ndarray, dims: Sequence[int], sites: Sequence[int]) -> np.ndarray:
    """Extend an operator acting on the listed factors to the full space.

    ``op`` acts on the factors ``sites`` in the given order (identity on
    everything else); the returned matrix acts on the full composite space.
    """
    op = np.asarray(op)
    dims = tuple(int(d) for d in dims)
    sites = tuple(int(s) for s in sites)
    n = len(dims)
    _check_keep(sites, n)
    site_dims = tuple(dims[s] for s in sites)
    sd = int(np.prod(site_dims))
    if op.shape != (sd, sd):
        raise ValueError(f"operator shape {op.shape} does not match site dims {site_dims}")
    k = len(sites)
    operands = [op.reshape(site_dims + site_dims), list(sites) + [n + s for s in sites]]
    for j in range(n):
        if j not in sites:
            operands += [np.eye(dims[j]), [j, n + j]]
    out_labels = list(range(2 * n))
    full = np.einsum(*operands, out_labels)
    d = int(np.prod(dims))
    return full.reshape(d, d)


def condition_on_factor(
    rho: np.ndarray, dims: Sequence[int], site: int, vec: np.ndarray
) -> np.ndarray:
    """Unnormalized operator <vec|rho|vec> taken on one factor.

    Returns the conditional operator on the remaining factors (their
    order preserved); its trace is the probability of the outcome.
    """
    rho = np.asarray(rho)
    dims = _check_dims(rho.shape[0], dims)
    n = len(dims)
    (site,) = _check_keep((site,), n)
    vec = np.asarray(vec).reshape(-1)
    if vec.shape[0] != dims[site]:
        raise ValueError(f"vector length {vec.shape[0]} does not match factor dim {dims[site]}")
    t = rho.reshape(dims + dims)
    t = np.tensordot(vec.conj(), t, axes=([0], [site]))
    # after the first contraction axis (n + site) has shifted left by one
    t = np.tensordot(t, vec, axes=([n + site - 1], [0]))
    rest = int(np.prod(dims)) // dims[site]
    return t.reshape(rest, rest)


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Trace distance (1/2) Tr|a - b| between Hermitian operators."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def _sqrt_psd(a: np.ndarray) -> np.ndarray:
    # eigenvalues slightly below zero are roundoff from partial traces
    w, v = np.linalg.eigh(a)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """Uhlmann fidelity Tr sqrt(sqrt(a) b sqrt(a)) of two density matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")
    sa = _sqrt_psd(a)
    w = np.linalg.eigvalsh(sa @ b @ sa)
    return float(np.sum(np.sqrt(np.clip(w, 0.0, None))))


def check_state_vector(psi: np.ndarray, dims: Sequence[int] | None = None) -> np.ndarray:
    """Validate a normalized state vector; returns it as a complex array."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if not np.all(np.isfinite(psi.view(float))):
        raise ValueError("state vector has non-finite entries")
    if dims is not None:
        _check_dims(psi.shape[0], dims)
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > HERMITIAN_ATOL:
        raise ValueError(f"state vector norm {norm} is not 1 within {HERMITIAN_ATOL}")
    return psi


def _check_hermitian_psd(rho: np.ndarray, dims: Sequence[int] | None) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho.view(float))):
        raise ValueError("matrix has non-finite entries")
    if dims is not None:
        _check_dims(rho.shape[0], dims)
    if np.max(np.abs(rho - rho.conj().T)) > HERMITIAN_ATOL:
        raise ValueError("matrix is not Hermitian within 1e-12")
    w = np.linalg.eigvalsh(rho)
    if w[0] < EIGENVALUE_FLOOR:
        raise ValueError(f"matrix has eigenvalue {w[0]} below {EIGENVALUE_FLOOR}")
    return rho


def check_density_matrix(rho: np.ndarray, dims: Sequence[int] | None = None) -> np.ndarray:
    """Validate a density matrix (Hermitian, PSD, unit trace)."""
    rho = _check_hermitian_psd(rho, dims)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_ATOL:
        raise ValueError(f"trace {tr} is not 1 within {TRACE_ATOL}")
    return rho


def check_conditional_state(rho: np.ndarray, dims: Sequence[int] | None = None) -> np.ndarray:
    """Validate a post-selected state: Hermitian, PSD, trace in (0, 1]."""
    rho = _check_hermitian_psd(rho, dims)
    tr = np.trace(rho).real
    if tr <= 0.0 or tr > 1.0 + TRACE_ATOL:
        raise ValueError(f"conditional state trace {tr} outside (0, 1]")
    return rho
