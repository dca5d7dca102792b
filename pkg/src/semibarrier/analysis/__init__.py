from semibarrier.analysis.beamsplit import beamsplit_scatter, collective_beamsplit, schmidt_rank
from semibarrier.analysis.coherence import CoherenceMetrics, coherence_metrics
from semibarrier.analysis.efficiency import (
    EfficiencyModel,
    efficiency_approx,
    efficiency_exact,
    monte_carlo_qubit_usage,
    predicted_entries,
)
from semibarrier.analysis.sectors import (
    SectorDecomposition,
    label_of_mode,
    labels_to_modes,
    n_sectors,
    predict_trapped_mixture,
    predict_two_fermion_word,
    sector_decompose,
)
from semibarrier.analysis.slater import SlaterDecomposition, coefficient_matrix, slater_rank
from semibarrier.analysis.trapping import simulate_residence, trapping_time
