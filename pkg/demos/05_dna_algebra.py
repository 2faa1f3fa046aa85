"""
DNA coding of pixels
====================

Each byte splits into four 2-bit symbols, and each symbol becomes a base
under one of eight coding rules.  The base-level XOR is ordinary bitwise
XOR in disguise.
"""

# %%
import itertools

import numpy as np

from qmedshield import dna

for rule, bases in dna.RULES.items():
    print(f"rule {rule}: 00->{bases[0]} 01->{bases[1]} 10->{bases[2]} 11->{bases[3]}")

# %% [markdown]
# Rules 3 and 7 share the same table, so only seven distinct codings exist.

# %%
print("distinct rules:", len(set(dna.RULES.values())))

# %% [markdown]
# 27 = 00 01 10 11 in binary.  Planes are stored LSB-first, so plane 3
# holds the top two bits.

# %%
planes = dna.encode(np.array([[27]], np.uint8), (1, 1, 1, 1))
print("27 under rule 1 (MSB first):", "".join(dna.planes_to_strings(planes)[j][0] for j in (3, 2, 1, 0)))

# %% [markdown]
# The XOR table, printed row by row.

# %%
print("   " + " ".join("ACGT"))
for a in "ACGT":
    print(a + ": " + " ".join(dna.dna_xor(a, b) for b in "ACGT"))

code = dict(zip("AGCT", range(4)))
same = all(dna.dna_xor(a, b) == "AGCT"[code[a] ^ code[b]] for a, b in itertools.product("ACGT", repeat=2))
print("equals bitwise XOR under rule 1:", same)

# %% [markdown]
# Round trip for every rule and every byte value.

# %%
all_bytes = np.arange(256, dtype=np.uint8).reshape(16, 16)
print("all rules invert:", all(
    np.array_equal(dna.decode(dna.encode(all_bytes, (r,) * 4), (r,) * 4), all_bytes) for r in dna.RULES
))
