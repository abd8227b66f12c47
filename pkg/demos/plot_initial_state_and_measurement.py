"""
Coherence versus initial state and measurement strength
=======================================================

The atom starts in ``cos(theta/2)|e> + sin(theta/2)|g>``, is weakly measured
with strength p1, sits in the leaky cavity until lambda0*t = 10 and is then
hit by the reversal with strength p2.  Rates are in units of lambda0.
"""

import matplotlib.pyplot as plt
import numpy as np

from cavitycoh.sweep import figure_spec, run_sweep

#%%
# Sweep the polar angle with p1 = p2 = 0.5, omega = 1, lambda = 5.

table = run_sweep(figure_spec(1))
theta, c = table.column("theta"), table.column("c_l1")
print("largest coherence at theta =", theta[np.argmax(c)])

plt.plot(theta, c)
plt.xlabel(r"$\theta$")
plt.ylabel(r"$C_{l_1}$")
plt.show()

#%%
# Both strengths together, equal superposition start.  Without renormalization
# the surviving coherence only shrinks as either strength grows.

table = run_sweep(figure_spec(2))
p1 = np.unique(table.column("p1"))
p2 = np.unique(table.column("p2"))
c = table.column("c_l1").reshape(len(p1), len(p2))

plt.pcolormesh(p2, p1, c, shading="auto")
plt.xlabel("$p_2$")
plt.ylabel("$p_1$")
plt.colorbar(label=r"$C_{l_1}$")
plt.show()
