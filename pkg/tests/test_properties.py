import functools
import json
import os
import subprocess
import sys

import pytest

from cohoma import properties


@functools.lru_cache(maxsize=None)
def suites():
    return properties.all_suites(200)


@pytest.mark.parametrize("suite", range(7))
def test_property_suites(suite):
    rep = suites()[suite]
    assert rep.ok, (rep.command, rep.failures())
    assert len(rep.entries) == 200


PROBE = r"""
import json, random
from cohoma import BACKEND, apply, commutator, jet, words
from cohoma.sampling import random_polynomial
p = jet.flat_tsm(3)
rng = random.Random(9)
polys = [random_polynomial(p.alg, rng, terms=4, max_len=3) for _ in range(30)]
out = [str(a * b) for a, b in zip(polys, polys[1:])]
out += [str(apply(p.K, f)) for f in polys] + [str(apply(p.Q, f)) for f in polys]
out.append(words.reduce("Q K^3 Q K").render())
print(json.dumps({"backend": BACKEND, "out": out}))
"""


def probe(pure):
    env = dict(os.environ)
    env.pop("COHOMA_PURE", None)
    if pure:
        env["COHOMA_PURE"] = "1"
    res = subprocess.run([sys.executable, "-c", PROBE], env=env, capture_output=True, text=True, check=True)
    return json.loads(res.stdout)


def test_backends_agree():
    pure = probe(True)
    assert pure["backend"] == "python"
    native = probe(False)
    if native["backend"] != "cython":
        pytest.skip("compiled kernels are not built")
    assert native["out"] == pure["out"]
