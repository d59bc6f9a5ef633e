"""Exhaustive, size-bounded checks of the partial-composition axioms.

Every identity is evaluated as an equality of exact linear combinations.
Ground sets are drawn from ``{1..n}``: the first argument lives on
``1..a``, the second on the next ``b`` labels, the third on the next ``c``.
"""

import json
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product

from .linear import LinComb, extend_bilinear, extend_linear
from .report import CheckReport

AXIOMS = ("A1", "A2", "NPL", "N1", "N2", "U1", "U2", "MU-COMPAT", "MORPHISM")
TERNARY = ("A1", "A2", "NPL")
DEFAULT_MAX_INSTANCES = 10**6


@dataclass(frozen=True)
class AxiomCheck:
    """One axiom on one structure, with size bounds.

    ``max_size`` bounds the ground set of the final composite; ``max_part``
    optionally bounds each argument.  For MU-COMPAT they bound the left and
    right ground sets instead, and ``max_blocks`` the number of factors.
    ``samples`` and ``seed`` drive the randomised naturality check.
    ``product`` is the twisted product for MU-COMPAT; ``morphism`` is a
    ``(psi, dim)`` pair for MORPHISM.
    """

    axiom: str
    structure: object
    max_size: int = 5
    max_part: int = None
    max_instances: int = DEFAULT_MAX_INSTANCES
    samples: int = 100
    seed: int = 0
    max_blocks: int = 3
    product: object = None
    morphism: object = None

    def __post_init__(self):
        if self.axiom not in AXIOMS:
            raise ValueError(f"unknown axiom {self.axiom!r}; expected one of {', '.join(AXIOMS)}")
        if self.max_size < 1 or (self.max_part is not None and self.max_part < 1):
            raise ValueError("bounds must be positive")
        if self.max_instances < 1:
            raise ValueError("instance cap must be positive")


def _one(term):
    return LinComb.single(term)


def size_configurations(check):
    """Argument sizes to sweep, smallest composite first."""
    n, cap = check.max_size, check.max_part or check.max_size + 2
    if check.axiom in TERNARY:
        low = 2 if check.axiom == "A1" else 1
        cfgs = [(a, b, c)
                for a in range(low, cap + 1)
                for b in range(1, cap + 1)
                for c in range(1, cap + 1)
                if a + b + c - 2 <= n]
    elif check.axiom == "U1":
        cfgs = [(b,) for b in range(1, min(n, cap) + 1)]
    elif check.axiom == "U2":
        cfgs = [(a,) for a in range(1, min(n, cap) + 1)]
    else:
        cfgs = [()]
    return sorted(cfgs, key=lambda c: (sum(c), c))


def _ranges(sizes):
    out, start = [], 1
    for k in sizes:
        out.append(range(start, start + k))
        start += k
    return out


def _memo(P):
    """Cached composition for one sweep; sub-results recur across instances."""
    cache = {}

    def comp(x, s, y):
        key = (x, s, y)
        if key not in cache:
            cache[key] = P.compose(x, s, y)
        return cache[key]

    def comp_lin(a, s, b):
        return extend_bilinear(lambda x, y: comp(x, s, y), a, b)

    return comp, comp_lin


def _ternary(check, sizes, report):
    P = check.structure
    comp, comp_lin = _memo(P)
    S, T, U = _ranges(sizes)
    xs, ys, zs = P.basis(S), P.basis(T), P.basis(U)
    if check.axiom == "A1":
        points = [(s, s2) for s in S for s2 in S if s < s2]
    else:
        points = [(s, t) for s in S for t in T]
    for x, y, z in product(xs, ys, zs):
        X, Y, Z = _one(x), _one(y), _one(z)
        for p, q in points:
            if report.instances >= check.max_instances:
                report.truncated = True
                return
            if check.axiom == "A1":
                lhs = comp_lin(comp(x, p, y), q, Z)
                rhs = comp_lin(comp(x, q, z), p, Y)
                inputs = {"x": x, "s": p, "y": y, "s'": q, "z": z}
            elif check.axiom == "A2":
                lhs = comp_lin(X, p, comp(y, q, z))
                rhs = comp_lin(comp(x, p, y), q, Z)
                inputs = {"x": x, "s": p, "y": y, "t": q, "z": z}
            else:
                lhs = comp_lin(comp(x, p, y), q, Z) - comp_lin(X, p, comp(y, q, z))
                rhs = comp_lin(comp(y, q, x), p, Z) - comp_lin(Y, q, comp(x, p, z))
                inputs = {"x": x, "s": p, "y": y, "t": q, "z": z}
            report.record(sizes, inputs, lhs, rhs)


def _units(check, sizes, report):
    P = check.structure
    if not P.has_unit:
        raise ValueError(f"{P.name} has no unit")
    (k,) = sizes
    ground = range(1, k + 1)
    for x in P.basis(ground):
        if check.axiom == "U1":
            star = k + 1
            pairs = [({"u": star, "x": x}, P.compose_lin(P.unit(star), star, _one(x)))]
        else:
            pairs = [({"x": x, "s": s}, P.compose_lin(_one(x), s, P.unit(s))) for s in ground]
        for inputs, lhs in pairs:
            if report.instances >= check.max_instances:
                report.truncated = True
                return
            report.record(sizes, inputs, lhs, _one(x))


def transport_lin(P, a, sigma):
    return extend_linear(lambda t: P.transport(t, sigma), a)


def _naturality(check, report):
    P = check.structure
    rng = random.Random(check.seed)
    n = check.max_size
    pairs = [(a, b) for a in range(1, n + 1) for b in range(1, n + 1) if a + b - 1 <= n]
    alphabet = range(1000, 1000 + 4 * n)
    tries = 0
    while report.instances < check.samples and tries < 50 * check.samples:
        tries += 1
        a, b = rng.choice(pairs)
        S, T = _ranges((a, b))
        xs, ys = P.basis(S), P.basis(T)
        if not xs or not ys:
            continue
        x, y, s = rng.choice(xs), rng.choice(ys), rng.choice(list(S))
        fresh = rng.sample(alphabet, a + b)
        sigma1 = dict(zip(S, fresh[:a]))
        sigma2 = dict(zip(T, fresh[a:]))
        whole = {k: v for k, v in sigma1.items() if k != s}
        whole.update(sigma2)
        lhs = transport_lin(P, P.compose(x, s, y), whole)
        rhs = P.compose(P.transport(x, sigma1), sigma1[s], P.transport(y, sigma2))
        report.record((a, b), {"x": x, "s": s, "y": y, "sigma1": sigma1, "sigma2": sigma2}, lhs, rhs)


def _unit_naturality(check, report):
    P = check.structure
    if not P.has_unit:
        raise ValueError(f"{P.name} has no unit")
    labels = list(range(1, check.max_size + 1)) + [1000, 1001]
    for s1 in labels:
        for s2 in labels:
            report.record((1,), {"from": s1, "to": s2}, transport_lin(P, P.unit(s1), {s1: s2}), P.unit(s2))


def _run_config(check, sizes):
    report = CheckReport(check.axiom, check.structure.name)
    if check.axiom in TERNARY:
        _ternary(check, sizes, report)
    else:
        _units(check, sizes, report)
    return report


def run_check(check, jobs=1):
    """Run ``check`` exhaustively and return a :class:`CheckReport`.

    With ``jobs > 1`` size configurations are farmed out to worker
    processes and merged in configuration order; the result matches the
    serial run unless the instance cap is hit.
    """
    P = check.structure
    if check.axiom == "MU-COMPAT":
        from .operads import check_mu_compatibility

        if check.product is None:
            raise ValueError("MU-COMPAT needs a twisted product")
        return check_mu_compatibility(P, check.product, max_s=check.max_size,
                                      max_t=check.max_part or 3, max_blocks=check.max_blocks,
                                      max_instances=check.max_instances)
    if check.axiom == "MORPHISM":
        from .polymap import check_palgebra_morphism

        if check.morphism is None:
            raise ValueError("MORPHISM needs a (psi, dim) pair")
        psi, dim = check.morphism
        return check_palgebra_morphism(P, psi, dim, max_size=check.max_size,
                                       max_instances=check.max_instances)
    report = CheckReport(check.axiom, P.name)
    if check.axiom == "N1":
        _naturality(check, report)
        return report
    if check.axiom == "N2":
        _unit_naturality(check, report)
        return report
    if check.axiom in ("U1", "U2") and not P.has_unit:
        raise ValueError(f"{P.name} has no unit")
    cfgs = size_configurations(check)
    if jobs > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_run_config, [check] * len(cfgs), cfgs))
        for part in parts:
            report.merge(part)
            if report.instances >= check.max_instances:
                report.truncated = True
                break
        return report
    for sizes in cfgs:
        if check.axiom in TERNARY:
            _ternary(check, sizes, report)
        else:
            _units(check, sizes, report)
        if report.truncated:
            break
    return report


def _input_key(inputs):
    return json.dumps(inputs_to_json(inputs), sort_keys=True)


def minimal_counterexample(report):
    """The stored failure with the smallest total size, then sizes, then inputs."""
    if not report.failures:
        raise ValueError(f"{report.structure} {report.axiom} has no failures")
    return min(report.failures, key=lambda f: (sum(f.sizes), f.sizes, _input_key(f.inputs)))


def value_to_json(value):
    if isinstance(value, LinComb):
        from .serialize import lincomb_to_json

        return lincomb_to_json(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k): value_to_json(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [value_to_json(v) for v in value]
    return value


def inputs_to_json(inputs):
    return {k: value_to_json(v) for k, v in inputs.items()}


def report_to_json(report):
    out = {
        "axiom": report.axiom,
        "structure": report.structure,
        "passed": report.passed,
        "instances": report.instances,
        "failure_count": report.failure_count,
        "truncated": report.truncated,
    }
    if report.failures:
        f = minimal_counterexample(report)
        out["witness"] = {
            "sizes": list(f.sizes),
            "inputs": inputs_to_json(f.inputs),
            "lhs": value_to_json(f.lhs),
            "rhs": value_to_json(f.rhs),
            "difference": value_to_json(f.difference),
        }
    return out
