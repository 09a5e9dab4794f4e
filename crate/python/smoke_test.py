"""Smoke test for the twistqm_py extension module."""

import math

import twistqm_py as tq

phys = tq.PhysicsParams.natural()
geom = tq.CylinderGeometry(1.0, 1.0)

e = tq.eigenenergy(1, 0, geom, phys)
assert abs(e - (math.pi**2 / 2 - 0.125)) < 1e-12, e

states = tq.list_states(3, 2, geom)
assert len(states) == 15 and states[0][:2] == (1, 0)

pp, pz, zz = tq.twisted_metric(geom, 0.5)
assert abs(pp * zz - pz * pz - 1.0) < 1e-14

curv = tq.curvatures(geom, 0.5)
assert abs(curv["geometric_potential"] + 0.125) < 1e-14

fd = tq.fd_bound_spectrum(1, geom, tq.TwistProfile.linear_ramp(0.3), phys, points=400, count=2)
assert abs(fd[0] - tq.eigenenergy(1, 1, geom)) < 1e-6 * abs(fd[0]), fd

emb = tq.ScatteringScenario.embedded(geom, 1.0, 1)
assert abs(tq.solve_scattering(2.0, emb)["T"] - 1.0) < 1e-10

free = tq.ScatteringScenario.free(geom, 0.4, 0)
res = free.predicted_resonance(1)
assert abs(tq.solve_scattering(res, free)["T"] - 1.0) < 1e-8

rows = tq.transmission_sweep(free, [-0.5, 1.0, 2.0, res])
assert rows[0][3] == "sub_threshold"
assert all(abs(t + r - 1.0) < 1e-10 for _, t, r, flag in rows if flag == "ok")

try:
    tq.CylinderGeometry(-1.0, 1.0)
except ValueError:
    pass
else:
    raise AssertionError("negative radius accepted")

print("smoke test passed")
