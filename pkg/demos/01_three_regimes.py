# %% [markdown]
# One small Hamiltonian per regime: how the reference state is laid out,
# and how close the prepared state lands to the dense answer.

# %%
import numpy as np

from hdqi import PauliHamiltonian, Polynomial
from hdqi.gf2code import build_code, find_block_partition
from hdqi.hamiltonians import h1_hamiltonian
from hdqi.oracle import rho_poly_oracle, trace_norm_distance
from hdqi.refstate import build_reference_state, predicted_bond_dim, register_amplitudes
from hdqi.simulator import run_pipeline

p = Polynomial((0.3, -0.8, 0.5))

cases = {
    "fields": PauliHamiltonian.from_labels([(0.7, "ZII"), (-0.4, "IXI"), (0.9, "IIY")]),
    "ring": PauliHamiltonian.from_labels([(0.5, "ZZI"), (-0.4, "IZZ"), (0.9, "ZIZ")]),
    "chain": h1_hamiltonian(1, 0.6),
}

# %%
for name, h in cases.items():
    mps = build_reference_state(h, p)
    print(f"{name:6s} regime={mps.regime:18s} D={mps.D} (expected {predicted_bond_dim(mps.regime, p.degree, mps.k)})"
          f" arities={mps.site_arities} norm={mps.norm:.4f}")

# %% [markdown]
# The ring has one dependency: the product of all three bonds is the identity.
# Only two control qubits are needed; the third bond is folded into the
# trailing factor of the MPS.

# %%
ring = cases["ring"]
code = build_code(ring)
print("code dimension", code.k)
print(find_block_partition(ring, code).to_dict())
print(np.round(register_amplitudes(build_reference_state(ring, p)), 4))

# %%
for name, h in cases.items():
    result = run_pipeline(h, p)
    dist = trace_norm_distance(result.rho, rho_poly_oracle(h, p))
    print(f"{name:6s} qubits={result.total_qubits:2d} decoder={result.decoder_kind:8s}"
          f" residual={result.residual:.1e} distance={dist:.1e}")
