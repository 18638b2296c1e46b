"""Walk through the pointwise curvature pipeline on three stock metrics.

Run:  python3 demos/01_curvature_basics.py
"""

import numpy as np

import lcwcheck as lw

# The whole pipeline starts from a metric given by closed-form component
# expressions on a chart box.  Flat space first: every tensor vanishes.
flat = lw.euclidean_metric(4)
pkg = lw.curvature_package(flat, [0.3, -0.2, 0.1, 0.0])
print("flat R^4:")
print(f"  |Riemann| = {pkg.riemann_norm:.3e}   |Weyl| = {pkg.weyl_norm:.3e}"
      f"   scalar = {pkg.scalar:.3e}")

# The round unit sphere in stereographic coordinates, g = 4 delta / (1+|x|^2)^2.
# Constant curvature 1: scalar curvature n(n-1), Ricci (n-1) g, Weyl zero.
for n in (3, 4, 5):
    sphere = lw.sphere_stereographic_metric(n)
    pkg = lw.curvature_package(sphere, 0.1 * np.ones(n))
    print(f"unit sphere S^{n}: scalar = {pkg.scalar:.12f} (expect {n * (n - 1)}),"
          f" |Weyl| = {pkg.weyl_norm:.2e}")

# Sectional curvatures are the diagonal of the curvature operator in an
# orthonormal frame; for the sphere every 2-plane has curvature exactly 1.
pkg = lw.curvature_package(lw.sphere_stereographic_metric(4), [0.1, 0.2, -0.3, 0.0])
sec = [pkg.riemann[i, j, i, j] for i in range(4) for j in range(i + 1, 4)]
print("sphere sectional curvatures:", np.round(sec, 12))

# Conformally flat metrics exp(2f) delta have vanishing Weyl tensor (n >= 4)
# and vanishing Cotton tensor (n = 3) -- the two obstruction quantities the
# rest of the toolkit is built around.
conf = lw.conformally_flat_metric(4, "0.3*x1+0.2*x2^2")
pkg = lw.curvature_package(conf, [0.4, -0.1, 0.2, 0.5])
print(f"conformally flat n=4: |Weyl|/|Riemann| = {pkg.weyl_norm / pkg.riemann_norm:.2e}")

conf3 = lw.conformally_flat_metric(3, "0.3*x1+0.2*x2^2")
pkg3 = lw.curvature_package(conf3, [0.4, -0.1, 0.2])
print(f"conformally flat n=3: |Cotton|/|Riemann| = {pkg3.cotton_norm / pkg3.riemann_norm:.2e}")

# A generic polynomial metric has nonzero everything; the package carries
# the full set of tensors in a g-orthonormal frame.
rng = np.random.default_rng(1)
generic = lw.random_polynomial_metric(4, rng)
pkg = lw.curvature_package(generic, rng.uniform(-0.5, 0.5, 4))
print("generic n=4 norms:",
      {k: round(v, 6) for k, v in {
          "riemann": pkg.riemann_norm, "weyl": pkg.weyl_norm,
          "cotton": pkg.cotton_norm, "scalar": pkg.scalar}.items()})
