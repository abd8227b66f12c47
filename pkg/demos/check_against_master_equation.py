"""
Closed form against direct integration
======================================

The closed-form dressed-state propagator is compared with a fixed-step RK4
integration of the time-local master equation.  A coarse step keeps this
quick; the ``validate`` subcommand runs the full dt = 1e-4 comparison.
"""

import numpy as np

from cavitycoh import (
    InitialPreparation,
    PhysicalParams,
    TimeGrid,
    compare_closed_form,
    embed_atom_with_vacuum,
    prepare_initial,
)

r0 = embed_atom_with_vacuum(prepare_initial(InitialPreparation(np.pi / 2)))

for steps in (2500, 5000, 10000):
    dev = compare_closed_form(PhysicalParams(omega=1.0, lam=5.0), r0, TimeGrid(0.0, 10.0, steps))
    print(f"dt={10 / steps:.0e}: max deviation {dev:.3e}")
