"""Symbolic transfer entropy with reduced-alphabet symbolizers.

Ordinal (Bandt-Pompe) patterns need ``m!`` symbols. The binning and
principal symbolizers shrink that alphabet; k-means is included as a
clustering baseline.
"""

from .core import EmbeddingConfig, TimeSeries, advise_max_m, alphabet_size, embed
from .entropy import (
    JointCounts,
    TeTrace,
    accumulate,
    mse,
    permutation_entropy,
    sliding_te,
    surrogate_pvalue,
    symbolic_transfer_entropy,
    transfer_entropy,
)
from .estimators import (
    BinningSymbolizer,
    KMeansSymbolizer,
    OrdinalSymbolizer,
    PrincipalSymbolizer,
    SymbolicTransferEntropy,
)
from .symbolize import (
    SymbolizerSpec,
    SymbolSequence,
    binning_symbol,
    kmeans_symbolize,
    ordinal_symbol,
    principal_symbol,
    symbolize,
)
from .synth import CoupledSystemSpec, generate, shuffle

__version__ = "0.1.0"
