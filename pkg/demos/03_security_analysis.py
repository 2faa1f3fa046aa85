"""
Statistical security analysis
=============================

Run the metric battery on a plain/cipher pair, then look at the two places
where the scheme is weaker than its statistics suggest.
"""

# %%
import json

import numpy as np

from qmedshield import analysis
from qmedshield.cipher import encrypt, keygen
from qmedshield.samples import gradient_texture, phantom

key = keygen(bytes(range(32)))

# %% [markdown]
# Full report for the phantom.  The summary table mirrors the JSON report.

# %%
plain = phantom(256)
cipher = encrypt(plain, key)
report = analysis.analyze(plain, cipher, key)
for name, value, verdict in report.summary_rows():
    print(f"{name:<34} {value:>18}  {verdict}")

# %%
d = report.to_dict()
print(json.dumps(d["correlation"], indent=2))

# %% [markdown]
# Error metrics against a mid-gray plaintext.  MAE can never exceed RMSE,
# so a large MAE always forces a small PSNR.

# %%
g = gradient_texture(256, 256)
m = analysis.error_metrics(g, encrypt(g, key))
print(f"MAE={m.mae:.2f} RMSE={m.rmse:.2f} PSNR={m.psnr:.2f} dB")

# %% [markdown]
# Differential behaviour.  Every stage works pixel by pixel with a key
# stream that does not depend on the plaintext, so changing one plaintext
# pixel changes exactly one ciphertext pixel.

# %%
variant, pos = analysis.one_pixel_variant(plain)
c2 = encrypt(variant, key)
print(f"one-pixel change at {pos}: NPCR={analysis.npcr(cipher, c2):.4f}%")

# %% [markdown]
# Chosen plaintext.  Every DNA rule is an affine map on 2-bit symbols, so
# the whole cipher is c = A(m) xor b with the same linear part A at every
# pixel.  The relation m1^m2 == c1^c2 then holds wherever A fixes the
# difference, which is a few percent of pixels instead of ~0.4%.

# %%
rng = np.random.default_rng(0)
m1, m2 = (rng.integers(0, 256, (256, 256), dtype=np.uint8) for _ in range(2))
cp = analysis.cp_attack_test(m1, m2, key)
print(f"XOR relation violated on {cp.violation_rate:.2f}% of pixels (ideal: ~99.6%)")
