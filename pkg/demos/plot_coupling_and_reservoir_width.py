"""
Coupling strength and reservoir memory
======================================

Strong atom-cavity coupling and a narrow reservoir spectrum both slow the
loss of coherence.  No measurement is applied here (p1 = p2 = 0).
"""

import matplotlib.pyplot as plt
import numpy as np

from cavitycoh import InitialPreparation, PhysicalParams, ProtocolConfig, coherence_l1, run_protocol

#%%
# Long-time decay for three couplings at lambda = 3 (Markovian reservoir).

t = np.linspace(0, 1000, 2000)
for omega in (1.0, 10.0, 40.0):
    cfg = ProtocolConfig(params=PhysicalParams(omega=omega, lam=3.0), prep=InitialPreparation(np.pi / 2))
    plt.plot(t, coherence_l1(run_protocol(cfg, t)), label=rf"$\Omega={omega:g}\lambda_0$")
plt.xlabel(r"$\lambda_0 t$")
plt.ylabel(r"$C_{l_1}$")
plt.legend()
plt.show()

#%%
# Spectral widths from deep non-Markovian (0.01) to Markovian (3), omega = 1.

t = np.linspace(0, 20, 401)
for lam in (0.01, 0.1, 1.0, 3.0):
    cfg = ProtocolConfig(params=PhysicalParams(omega=1.0, lam=lam), prep=InitialPreparation(np.pi / 2))
    plt.plot(t, coherence_l1(run_protocol(cfg, t)), label=rf"$\lambda={lam:g}\lambda_0$")
plt.xlabel(r"$\lambda_0 t$")
plt.ylabel(r"$C_{l_1}$")
plt.legend()
plt.show()
