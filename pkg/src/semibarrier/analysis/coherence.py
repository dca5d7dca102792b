from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from semibarrier.hilbert import EPS_EIG, DensityMatrix


@dataclass(frozen=True)
class CoherenceMetrics:
    rank: int
    purity: float
    l1: float


def coherence_metrics(rho, eps_eig: float = EPS_EIG) -> CoherenceMetrics:
    """Rank above ``eps_eig``, purity ``tr rho^2`` and the l1 off-diagonal sum."""
    mat = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho)
    evals = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
    rank = int(np.sum(evals > eps_eig))
    purity = float(np.real(np.trace(mat @ mat)))
    l1 = float(np.abs(mat).sum() - np.abs(np.diag(mat)).sum())
    return CoherenceMetrics(rank, purity, l1)
