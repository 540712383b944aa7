"""Reconstruct a shadow manifold and predict one series from the other.

Walks through the core pipeline one step at a time on a small coupled
logistic pair: delay embedding, nearest neighbors inside a library,
simplex weights, and a single cross-map prediction compared against the
truth. Run it directly:

    python demos/01_shadow_manifold.py
"""
import numpy as np

from parccm import (
    EmbeddingParams,
    LibraryMask,
    build_table,
    cross_map,
    embed,
    generate_coupled_logistic,
    knn_in_library,
    simplex_weights,
)

# X drives Y (coupling 0.25 into Y, nothing back), so Y's history carries
# an imprint of X that the cross mapping can recover.
x, y = generate_coupled_logistic(n=400, beta_xy=0.25, beta_yx=0.0, seed=7)
print(f"series: {x.name} and {y.name}, {x.n} points each")
print(f"first five of {x.name}: {np.round(x.values[:5], 4)}")

# Delay-embed Y into a 2-dimensional shadow manifold with lag 1. Each
# manifold point is (y_t, y_{t-1}); the first valid time is t = 1.
params = EmbeddingParams(E=2, tau=1)
manifold = embed(y, params)
print(f"\nshadow manifold of {y.name}: {manifold.m} points in E={params.E} dims")
print(f"point at t=5 is (y_5, y_4) = {manifold.points[4]}")

# Precompute every pairwise distance once, sorted per row. Lookups against
# any library subset then reduce to a masked scan of a sorted row.
table = build_table(manifold)
print(f"distance table holds {table.entry_count:,} sorted entries")

# Use the first 150 manifold points as the library and find the E+1 = 3
# nearest library neighbors of the point at row 200.
library = LibraryMask.from_indices(np.arange(150), manifold.m)
query = 200
neighbors = knn_in_library(table, query, library, k=params.E + 1)
print(f"\nnearest library neighbors of row {query}:")
for rank, (row, dist) in enumerate(neighbors, start=1):
    print(f"  #{rank}: row {row:3d} at distance {dist:.6f}")

# Exponential simplex weights: the closest neighbor dominates, and the
# weights always form a convex combination.
dists = np.array([d for _, d in neighbors])
weights = simplex_weights(dists)
print(f"simplex weights: {np.round(weights, 4)} (sum = {weights.sum():.1f})")

# One cross-map estimate by hand: average X at the neighbors' time stamps.
t0 = (params.E - 1) * params.tau
estimate = sum(w * x.values[t0 + row] for w, (row, _) in zip(weights, neighbors))
truth = x.values[t0 + query]
print(f"\npredict {x.name} at t={t0 + query} from {y.name}'s neighbors:")
print(f"  estimate {estimate:.4f} vs truth {truth:.4f}")

# The full cross mapping repeats that for every manifold point and scores
# the predictions with Pearson correlation.
result = cross_map(x, manifold, table, library)
print(f"\nfull cross map over {result.predicted.size} query times: rho = {result.rho:.4f}")
print("a skill well above zero means Y's geometry encodes X's history")
