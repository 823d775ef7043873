"""Maps of elections: cultures, positionwise distance, embeddings and election features."""

from .compass import (
    COMPASS,
    compass_matrix,
    convex_path,
    election_from_frequency_matrix,
    election_from_position_matrix,
)
from .core import (
    Election,
    FrequencyMatrix,
    PositionMatrix,
    frequency_matrix,
    position_matrix,
    spearman_distance,
    swap_distance,
)
from .cultures import CultureSpec, make_rng, sample
from .distance import DistanceMatrix, distance_matrix, emd, normalized_positionwise, positionwise
from .embed import EmbedConfig, Embedding, fruchterman_reingold, kamada_kawai
from .eval import EmbeddingSummary, distortion, monotonicity, pcc

__version__ = "0.1.0"
