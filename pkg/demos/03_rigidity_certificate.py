"""Certify the perfect strategy, then watch the certificate degrade smoothly.

The certificate builds one local isometry per player out of the strategy's
own reflections, pushes the shared state through, and decomposes the image
over Bell pairs on the three extracted qubit pairs.  For the exact optimum
everything is zero to machine precision and all weight sits on the
(phi+, phi+, phi+) triple.  A perturbed strategy at winning probability
1 - epsilon keeps every residual within a constant times sqrt(epsilon).
"""

import numpy as np

from pentagram import PerturbationSpec, certify, perturb_ideal, ideal_strategy


def _summarize(tag, report):
    print(f"{tag}:")
    print(f"  epsilon                  {report.epsilon:.3e}")
    print(f"  state residual           {report.state_residual:.3e}")
    print(f"  max operator residual    {report.max_op_residual:.3e}")
    print(f"  max consistency residual {report.max_consistency_residual:.3e}")
    print(f"  max context change       {max(report.context_change_residuals.values()):.3e}")
    print(f"  max anticommutator       {max(report.anticommutator_residuals['alice'].values()):.3e}")
    print(f"  consistency bound ok     {report.consistency_bound_ok}")
    top = sorted(report.bell_weights.items(), key=lambda kv: -kv[1])[:3]
    shown = ", ".join(f"{'x'.join(k)}: {w:.6f}" for k, w in top)
    print(f"  top Bell weights         {shown}")


def main():
    _summarize("ideal strategy", certify(ideal_strategy()))

    for delta in (1e-3, 1e-2, 5e-2):
        report = certify(perturb_ideal(PerturbationSpec(delta, seed=42)))
        print()
        _summarize(f"perturbed at delta = {delta}", report)
        ratio = report.state_residual / np.sqrt(report.epsilon)
        print(f"  state residual / sqrt(epsilon) = {ratio:.2f}")


if __name__ == "__main__":
    main()
