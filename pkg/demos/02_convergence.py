"""Detect causal direction by watching skill converge with library size.

Runs a full sweep over growing libraries for both mapping directions of a
one-way coupled pair, prints the per-level skill table, and renders the
skill curves to an SVG. The hallmark of real coupling is skill that rises
toward a plateau as the library grows; an uncoupled direction stays flat
near zero. Run it directly:

    python demos/02_convergence.py

Outputs land in demos/output/.
"""
from pathlib import Path

from parccm import (
    Direction,
    ExecutionMode,
    SweepConfig,
    emit_plot,
    generate_coupled_logistic,
    run_sweep,
    summarize_convergence,
    write_skills_csv,
)

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

# X drives Y with coupling 0.2; Y never feeds back into X.
x, y = generate_coupled_logistic(n=800, beta_xy=0.2, beta_yx=0.0, seed=11)
print(f"generated {x.n}-point pair, coupling X->Y = 0.2, Y->X = 0")

config = SweepConfig(
    r=30,
    L_grid=(50, 120, 300, 700),
    E_grid=(2,),
    tau_grid=(1,),
    seed=11,
    mode=ExecutionMode("indexed", 2),
)
records = run_sweep(x, y, config)
print(f"swept {len(records)} replicates across both directions")

summary = summarize_convergence(records, min_delta=0.1)
for direction in Direction:
    cell = summary.cell(direction, 2, 1)
    print(f"\n{direction.value}  (E=2, tau=1)")
    print("     L   mean rho    sd")
    for level in cell.levels:
        print(f"  {level.L:4d}   {level.mean_rho:8.4f}   {level.sd_rho:.4f}")
    verdict = "converged" if cell.converged else "not converged"
    print(f"  delta rho = {cell.delta_rho:.4f} -> {verdict}")

# X_from_MY reads "predict X from Y's manifold": it converges because Y's
# dynamics absorbed X. The reverse direction stays flat since nothing of Y
# ever entered X.
skills_path = out_dir / "skills.csv"
write_skills_csv(records, skills_path)
plot_path, agg_path = emit_plot(skills_path, out_dir / "convergence.svg")
print(f"\nwrote {skills_path}")
print(f"wrote {plot_path} and {agg_path}")
