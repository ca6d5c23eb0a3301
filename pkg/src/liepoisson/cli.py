"""Command-line entry point.

Subcommands:

* ``verify <config>``: run the structural checks named in the config and
  emit a JSON report; exit 0 when every residual is below its threshold,
  1 on a residual failure, 2 on a malformed config.
* ``simulate <config>``: build the configured system, integrate its
  Hamiltonian flow, and emit a CSV trajectory with header
  ``t,<state coords...>,H,<casimirs...>``.
* ``bracket-table <config>``: emit the structure constants of the built
  extension as JSON.

``--seed`` fixes every randomized draw, making outputs byte-identical
across runs.  When the environment variable ``LIEPOISSON_OUTDIR`` is set,
relative ``--out`` paths are placed under it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from . import quantum, restricted
from .algebra import (
    DualPairing,
    LieAlgebra,
    algebra_from_json,
    algebra_to_json,
    builtin_algebra,
    check_structure,
    identity_pairing,
    so3,
    trace_pairing,
)
from .errors import ConfigError, LiePoissonError
from .extension import (
    ExtensionSpec,
    SkewBilinearMap,
    DerivationMap,
    build_extension,
    check_compatibility,
    check_predual_closure,
    direct_sum_pairing,
)
from .functions import build_named_function, rigid_body_energy
from .integrators import IntegratorConfig, integrate_flow
from .poisson import hamiltonian_vector_field
from .sequences import (
    LinearMapRec,
    MatrixStarAlgebra,
    SequenceSpec,
    Space,
    check_exact_sequence,
    dual_map,
    dual_sequence,
    wstar_central_split,
)
from .tolerances import (
    COMPATIBILITY_PASS,
    CONSTRUCTION_TOL,
    SUBSPACE_TOL,
    VERIFICATION_TOL,
)

__all__ = ["run_cli", "main"]

_DEFAULT_THRESHOLDS = {
    "structure": VERIFICATION_TOL,
    "compatibility": COMPATIBILITY_PASS,
    "predual_closure": VERIFICATION_TOL,
    "exactness": SUBSPACE_TOL,
    "dual_map": VERIFICATION_TOL,
    "wstar_split": CONSTRUCTION_TOL,
}


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}", "config")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}", "config")
    if not isinstance(doc, dict):
        raise ConfigError("config top level must be a JSON object", "config")
    return doc


def _require(doc: dict, field: str, context: str = ""):
    if field not in doc:
        full = f"{context}.{field}" if context else field
        raise ConfigError("missing required field", full)
    return doc[field]


def _scalar(v):
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return float(v)


def _cmatrix(rows, field: str) -> np.ndarray:
    try:
        return np.array([[_scalar(v) for v in row] for row in rows], dtype=complex)
    except (TypeError, IndexError, ValueError) as exc:
        raise ConfigError(f"not a matrix of scalars: {exc}", field)


def _cvector(vals, field: str) -> np.ndarray:
    try:
        return np.array([_scalar(v) for v in vals], dtype=complex)
    except (TypeError, IndexError, ValueError) as exc:
        raise ConfigError(f"not a vector of scalars: {exc}", field)


def _algebra_ref(node, field: str) -> tuple[LieAlgebra, DualPairing]:
    try:
        if isinstance(node, str) or (isinstance(node, dict) and "builtin" in node):
            alg = builtin_algebra(node)
            return alg, identity_pairing(alg)
        if isinstance(node, dict) and "dim" in node:
            return algebra_from_json(node)
    except (KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"bad algebra reference: {exc}", field)
    raise ConfigError("algebra reference must be a builtin name or an inline document", field)


def _pairing_override(alg: LieAlgebra, node, default: DualPairing, field: str) -> DualPairing:
    if node is None:
        return default
    if node == "identity":
        return identity_pairing(alg)
    if node == "trace":
        return trace_pairing(alg)
    try:
        return DualPairing(alg, _cmatrix(node, field).astype(alg.dtype))
    except LiePoissonError as exc:
        raise ConfigError(f"bad gram: {exc}", field)


def _to_field(values: np.ndarray, dtype, field: str) -> np.ndarray:
    """Cast parsed complex data to the algebra's scalar field."""
    if dtype is complex:
        return np.asarray(values, dtype=complex)
    if np.max(np.abs(np.imag(values)), initial=0.0) != 0.0:
        raise ConfigError("complex entries in a real-field document", field)
    return np.real(values)


def _extension_spec_from_config(body: dict) -> ExtensionSpec:
    n, n_pair = _algebra_ref(_require(body, "n", "system"), "n")
    h, h_pair = _algebra_ref(_require(body, "h", "system"), "h")
    n_pair = _pairing_override(n, body.get("n_gram"), n_pair, "n_gram")
    h_pair = _pairing_override(h, body.get("h_gram"), h_pair, "h_gram")

    w = np.zeros((n.dim, h.dim, h.dim), dtype=n.dtype)
    for entry in body.get("omega", []):
        try:
            a, i, j, v = entry
            val = _to_field(np.array(_scalar(v)), n.dtype, "omega")
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"bad omega triplet {entry!r}: {exc}", "omega")
        if not (0 <= a < n.dim and 0 <= i < h.dim and 0 <= j < h.dim):
            raise ConfigError(f"omega indices {entry[:3]} out of range", "omega")
        w[a, i, j] = val
        w[a, j, i] = -val

    mats = np.zeros((h.dim, n.dim, n.dim), dtype=n.dtype)
    phi_rows = body.get("phi", [])
    if phi_rows:
        if len(phi_rows) != h.dim:
            raise ConfigError(f"phi must list {h.dim} matrices", "phi")
        for i, m in enumerate(phi_rows):
            mm = _cmatrix(m, "phi")
            if mm.shape != (n.dim, n.dim):
                raise ConfigError(f"phi[{i}] has shape {mm.shape}", "phi")
            mats[i] = _to_field(mm, n.dtype, "phi")

    try:
        return ExtensionSpec(
            n, h, SkewBilinearMap(h, n, w), DerivationMap(h, n, mats), n_pair, h_pair
        )
    except (LiePoissonError, ValueError) as exc:
        raise ConfigError(f"inconsistent extension data: {exc}", "system")


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _residuals_ok(residuals: dict, threshold: float) -> bool:
    return all(abs(v) < threshold for v in residuals.values())


def _structure_residuals(named: dict[str, LieAlgebra]) -> dict:
    out = {}
    for key, alg in named.items():
        rep = check_structure(alg)
        out[f"{key}_antisymmetry"] = rep.antisymmetry_residual
        out[f"{key}_jacobi"] = rep.jacobi_residual
    return out


def _verify_context(doc: dict):
    """Build the objects each check operates on, per system kind."""
    system = _require(doc, "system")
    body = doc.get(system, doc.get("body", {}))
    ctx: dict = {"system": system}
    if system == "extension":
        ctx["spec"] = _extension_spec_from_config(body)
    elif system == "restricted":
        n_plus = int(_require(body, "n_plus", "restricted"))
        n_minus = int(_require(body, "n_minus", "restricted"))
        ctx["spec"] = restricted.restricted_extension_spec(n_plus, n_minus)
    elif system == "semidirect_qm":
        ctx["spec"] = quantum.semidirect_extension_spec(int(_require(body, "n", "semidirect_qm")))
    elif system == "rigid_body":
        ctx["algebras"] = {"so3": so3()}
    elif system == "sequence":
        ctx["body"] = body
    else:
        raise ConfigError(f"unknown system {system!r}", "system")
    ctx["body"] = body
    return ctx


def _sequence_from_body(body: dict) -> SequenceSpec:
    first = _cmatrix(_require(body, "first", "sequence"), "first").real
    second = _cmatrix(_require(body, "second", "sequence"), "second").real
    nu, nv, nw = first.shape[1], first.shape[0], second.shape[0]
    if second.shape[1] != nv:
        raise ConfigError("sequence maps are not composable", "second")
    grams = body.get("grams", {})
    algebras = body.get("attach_algebras", {})

    def space(name, dim):
        gram = (
            _cmatrix(grams[name], f"grams.{name}").real if name in grams else np.eye(dim)
        )
        alg = None
        if name in algebras:
            alg = _algebra_ref(algebras[name], f"attach_algebras.{name}")[0]
            if alg.dim != dim:
                raise ConfigError(
                    f"attached algebra has dim {alg.dim}, map needs {dim}",
                    f"attach_algebras.{name}",
                )
        return Space(dim, gram, alg)

    u, v, w = space("u", nu), space("v", nv), space("w", nw)
    return SequenceSpec(LinearMapRec(first, u, v), LinearMapRec(second, v, w))


def _run_check(name: str, ctx: dict, rng: np.random.Generator) -> dict:
    system = ctx["system"]
    if name == "structure":
        if "spec" in ctx:
            spec: ExtensionSpec = ctx["spec"]
            named = {"n": spec.n, "h": spec.h}
            if check_compatibility(spec).verdict == "pass":
                named["extension"] = build_extension(spec)
            return _structure_residuals(named)
        return _structure_residuals(ctx["algebras"])
    if name == "compatibility":
        if "spec" not in ctx:
            raise ConfigError(f"system {system!r} has no compatibility check", "checks")
        rep = check_compatibility(ctx["spec"])
        return {
            "derivation_residual": rep.derivation_residual,
            "cocycle_residual": rep.cocycle_residual,
            "representation_residual": rep.representation_residual,
        }
    if name == "predual_closure":
        if "spec" not in ctx:
            raise ConfigError(f"system {system!r} has no predual_closure check", "checks")
        spec = ctx["spec"]
        body = ctx["body"]
        c_sub = body.get("c_predual")
        a_sub = body.get("a_predual")
        c_sub = np.eye(spec.n.dim) if c_sub is None else _cmatrix(c_sub, "c_predual").T
        a_sub = np.eye(spec.h.dim) if a_sub is None else _cmatrix(a_sub, "a_predual").T
        return check_predual_closure(spec, c_sub, a_sub).as_dict()
    if name == "exactness":
        if system != "sequence":
            raise ConfigError("exactness check needs a sequence system", "checks")
        rep = check_exact_sequence(_sequence_from_body(ctx["body"]))
        d = rep.as_dict()
        d.pop("exact")
        return d
    if name == "dual_map":
        if system != "sequence":
            raise ConfigError("dual_map check needs a sequence system", "checks")
        seq = _sequence_from_body(ctx["body"])
        dual = dual_sequence(seq)
        rep = check_exact_sequence(dual).as_dict()
        rep.pop("exact")
        out = {f"dual_{k}": float(v) for k, v in rep.items()}
        # adjoint identity on random probes
        worst = 0.0
        for m in (seq.first, seq.second):
            d = dual_map(m)
            for _ in range(100):
                y = rng.normal(size=m.target.dim)
                x = rng.normal(size=m.source.dim)
                lhs = (d.matrix @ y) @ (m.source.gram @ x)
                rhs = y @ (m.target.gram @ (m.matrix @ x))
                worst = max(worst, abs(lhs - rhs))
        out["adjoint_identity_residual"] = worst
        return out
    if name == "wstar_split":
        if system != "sequence":
            raise ConfigError("wstar_split check needs a sequence system", "checks")
        ws = _require(ctx["body"], "wstar", "sequence")
        alg = MatrixStarAlgebra(tuple(int(d) for d in _require(ws, "block_dims", "wstar")))
        rep = wstar_central_split(alg, tuple(int(b) for b in _require(ws, "ideal_blocks", "wstar")))
        return rep.as_dict()
    raise ConfigError(f"unknown check {name!r}", "checks")


_DEFAULT_CHECKS = {
    "extension": ["structure", "compatibility", "predual_closure"],
    "restricted": ["structure", "compatibility", "predual_closure"],
    "semidirect_qm": ["structure", "compatibility"],
    "rigid_body": ["structure"],
    "sequence": ["exactness", "dual_map"],
}


def run_verify(doc: dict, seed: int) -> tuple[dict, int]:
    ctx = _verify_context(doc)
    rng = np.random.default_rng(seed)
    entries = doc.get("checks", _DEFAULT_CHECKS[ctx["system"]])
    results = []
    all_ok = True
    for entry in entries:
        if isinstance(entry, str):
            name, threshold = entry, _DEFAULT_THRESHOLDS.get(entry)
        else:
            name = _require(entry, "name", "checks")
            threshold = entry.get("threshold", _DEFAULT_THRESHOLDS.get(name))
        if threshold is None:
            raise ConfigError(f"unknown check {name!r}", "checks")
        residuals = _run_check(name, ctx, rng)
        ok = _residuals_ok(residuals, float(threshold))
        all_ok = all_ok and ok
        results.append(
            {
                "name": name,
                "threshold": float(threshold),
                "residuals": residuals,
                "passed": ok,
            }
        )
    report = {
        "system": ctx["system"],
        "seed": seed,
        "checks": results,
        "passed": all_ok,
    }
    return report, 0 if all_ok else 1


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------


@dataclass
class _SimSystem:
    labels: list[str]
    state0: np.ndarray
    field: Callable[[np.ndarray], np.ndarray]
    hamiltonian: Callable[[np.ndarray], float]
    observables: dict[str, Callable[[np.ndarray], float]]


def _casimir_entries(doc: dict) -> list[tuple[str, str, dict]]:
    out = []
    for entry in doc.get("casimirs", []):
        if isinstance(entry, str):
            out.append((entry, entry, {}))
        else:
            fn = _require(entry, "fn", "casimirs")
            out.append((entry.get("name", fn), fn, {k: v for k, v in entry.items() if k not in ("name", "fn")}))
    return out


def _sim_rigid_body(body: dict, doc: dict) -> _SimSystem:
    inertia = _require(body, "inertia", "rigid_body")
    state0 = np.asarray(_require(body, "initial", "rigid_body"), dtype=float)
    if state0.shape != (3,):
        raise ConfigError("initial state must have three components", "rigid_body.initial")
    alg = so3()
    pairing = identity_pairing(alg)
    ham_cfg = doc.get("hamiltonian")
    if ham_cfg is None:
        h = rigid_body_energy(inertia)
    else:
        h = build_named_function(
            _require(ham_cfg, "name", "hamiltonian"), ham_cfg, pairing
        )
    observables = {}
    for col, fn, params in _casimir_entries(doc):
        f = build_named_function(fn, params, pairing)
        observables[col] = f.eval
    return _SimSystem(
        labels=["b1", "b2", "b3"],
        state0=state0,
        field=lambda b: hamiltonian_vector_field(h, b, alg, pairing),
        hamiltonian=h.eval,
        observables=observables,
    )


def _sim_extension(body: dict, doc: dict) -> _SimSystem:
    spec = _extension_spec_from_config(body)
    if spec.scalar_field == "complex":
        raise ConfigError(
            "simulate supports real extension systems; use the restricted or "
            "semidirect_qm systems for complex ones",
            "system",
        )
    ext = build_extension(spec)
    pairing = direct_sum_pairing(spec, ext)
    init = _require(body, "initial", "extension")
    c0 = np.asarray(_require(init, "c", "initial"), dtype=float)
    a0 = np.asarray(_require(init, "a", "initial"), dtype=float)
    if c0.shape != (spec.n.dim,) or a0.shape != (spec.h.dim,):
        raise ConfigError(
            "initial (c, a) dimensions do not match the extension data", "initial"
        )
    ham_cfg = _require(doc, "hamiltonian")
    h = build_named_function(_require(ham_cfg, "name", "hamiltonian"), ham_cfg, pairing)
    observables = {}
    for col, fn, params in _casimir_entries(doc):
        f = build_named_function(fn, params, pairing)
        observables[col] = f.eval
    labels = [f"c{i + 1}" for i in range(spec.n.dim)] + [
        f"a{i + 1}" for i in range(spec.h.dim)
    ]
    return _SimSystem(
        labels=labels,
        state0=np.concatenate([c0, a0]),
        field=lambda y: hamiltonian_vector_field(h, y, ext, pairing),
        hamiltonian=h.eval,
        observables=observables,
    )


_QM_OBSERVABLES = {
    "v_norm_sq": lambda s: float(np.real(np.vdot(s.v, s.v))),
    "trace_rho_re": lambda s: float(np.real(np.trace(s.rho))),
    "rho_frobenius_sq": lambda s: float(np.sum(np.abs(s.rho) ** 2)),
}


def _sim_semidirect_qm(body: dict, doc: dict) -> _SimSystem:
    n = int(_require(body, "n", "semidirect_qm"))
    v0 = _cvector(_require(body, "v0", "semidirect_qm"), "v0")
    rho0 = _cmatrix(_require(body, "rho0", "semidirect_qm"), "rho0")
    try:
        state0 = quantum.QState(v0, rho0)
    except LiePoissonError as exc:
        raise ConfigError(str(exc), "semidirect_qm")
    if state0.n != n:
        raise ConfigError("v0 length does not match n", "semidirect_qm.v0")
    ham_cfg = _require(doc, "hamiltonian")
    name = _require(ham_cfg, "name", "hamiltonian")
    params = {}
    if "H0" in ham_cfg:
        params["H0"] = _cmatrix(ham_cfg["H0"], "hamiltonian.H0")
    if "A" in ham_cfg:
        params["A"] = _cmatrix(ham_cfg["A"], "hamiltonian.A")
    if "coupling" in ham_cfg:
        params["coupling"] = float(ham_cfg["coupling"])
    if name not in quantum.NAMED_HAMILTONIANS:
        raise ConfigError(f"unknown hamiltonian {name!r}", "hamiltonian.name")
    try:
        h = quantum.NAMED_HAMILTONIANS[name](params)
    except KeyError as exc:
        raise ConfigError(f"hamiltonian {name!r} needs parameter {exc}", "hamiltonian")

    def field(y):
        st = quantum.state_from_flat(y, n)
        vd, rd = quantum.qm_hamilton_rhs(h, st)
        return quantum.flat_coordinates(quantum.QState(vd, rd))

    observables = {}
    for col, fn, _params in _casimir_entries(doc):
        if fn not in _QM_OBSERVABLES:
            raise ConfigError(f"unknown observable {fn!r}", "casimirs")
        observables[col] = lambda y, fn=fn: _QM_OBSERVABLES[fn](
            quantum.state_from_flat(y, n)
        )
    labels = (
        [f"v{k + 1}_re" for k in range(n)]
        + [f"v{k + 1}_im" for k in range(n)]
        + [f"rho{i + 1}{j + 1}_re" for i in range(n) for j in range(n)]
        + [f"rho{i + 1}{j + 1}_im" for i in range(n) for j in range(n)]
    )
    return _SimSystem(
        labels=labels,
        state0=quantum.flat_coordinates(state0),
        field=field,
        hamiltonian=lambda y: h.eval(quantum.state_from_flat(y, n)),
        observables=observables,
    )


_RESTRICTED_OBSERVABLES = {
    "kappa_frobenius_sq": lambda s: float(np.sum(np.abs(s.kappa) ** 2)),
    "sigma_frobenius_sq": lambda s: float(np.sum(np.abs(s.sigma.to_full()) ** 2)),
}


def _block_from_config(node, dims: tuple[int, int], seed: int, field: str):
    if isinstance(node, dict) and "constructor" in node:
        kind = node["constructor"]
        if kind == "random_block":
            rng = np.random.default_rng(node.get("seed", seed))
            return restricted.random_block(*dims, rng)
        if kind == "diagonal_block":
            return restricted.diagonal_block(
                _cvector(_require(node, "diag_plus", field), f"{field}.diag_plus"),
                _cvector(_require(node, "diag_minus", field), f"{field}.diag_minus"),
            )
        raise ConfigError(f"unknown constructor {kind!r}", field)
    try:
        return restricted.block_from_json(node)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad block operator: {exc}", field)


def _sim_restricted(body: dict, doc: dict, seed: int) -> _SimSystem:
    n_plus = int(_require(body, "n_plus", "restricted"))
    n_minus = int(_require(body, "n_minus", "restricted"))
    dims = (n_plus, n_minus)
    kappa_node = _require(body, "kappa0", "restricted")
    if isinstance(kappa_node, dict) and kappa_node.get("constructor") == "random":
        rng = np.random.default_rng(kappa_node.get("seed", seed))
        kappa0 = rng.normal(size=(n_plus, n_plus)) + 1j * rng.normal(size=(n_plus, n_plus))
    else:
        kappa0 = _cmatrix(kappa_node, "restricted.kappa0")
    sigma0 = _block_from_config(_require(body, "sigma0", "restricted"), dims, seed, "restricted.sigma0")
    try:
        state0 = restricted.RestrictedState(kappa0, sigma0)
    except LiePoissonError as exc:
        raise ConfigError(str(exc), "restricted")

    ham_cfg = _require(doc, "hamiltonian")
    name = _require(ham_cfg, "name", "hamiltonian")
    params = dict(ham_cfg)
    if "A" in params:
        params["A"] = _cmatrix(params["A"], "hamiltonian.A")
    if "X0" in params:
        params["X0"] = _block_from_config(params["X0"], dims, seed, "hamiltonian.X0")
    try:
        h = restricted.named_restricted_hamiltonian(name, params, dims)
    except KeyError:
        raise ConfigError(f"unknown hamiltonian {name!r}", "hamiltonian.name")

    def field(y):
        st = restricted.state_from_flat(y, dims)
        kd, sd = restricted.restricted_hamiltonian_field(h, st)
        return restricted.flat_coordinates(restricted.RestrictedState(kd, sd))

    observables = {}
    for col, fn, _params in _casimir_entries(doc):
        if fn not in _RESTRICTED_OBSERVABLES:
            raise ConfigError(f"unknown observable {fn!r}", "casimirs")
        observables[col] = lambda y, fn=fn: _RESTRICTED_OBSERVABLES[fn](
            restricted.state_from_flat(y, dims)
        )

    n = n_plus + n_minus
    labels = (
        [f"kappa{i + 1}{j + 1}_re" for i in range(n_plus) for j in range(n_plus)]
        + [f"kappa{i + 1}{j + 1}_im" for i in range(n_plus) for j in range(n_plus)]
        + [f"sigma{i + 1}{j + 1}_re" for i in range(n) for j in range(n)]
        + [f"sigma{i + 1}{j + 1}_im" for i in range(n) for j in range(n)]
    )
    return _SimSystem(
        labels=labels,
        state0=restricted.flat_coordinates(state0),
        field=field,
        hamiltonian=lambda y: h.eval(restricted.state_from_flat(y, dims)),
        observables=observables,
    )


def _build_sim_system(doc: dict, seed: int) -> _SimSystem:
    system = _require(doc, "system")
    body = doc.get(system, doc.get("body", {}))
    if system == "rigid_body":
        return _sim_rigid_body(body, doc)
    if system == "extension":
        return _sim_extension(body, doc)
    if system == "semidirect_qm":
        return _sim_semidirect_qm(body, doc)
    if system == "restricted":
        return _sim_restricted(body, doc, seed)
    raise ConfigError(f"system {system!r} cannot be simulated", "system")


def _integrator_config(doc: dict) -> IntegratorConfig:
    cfg = doc.get("integrator", {})
    try:
        return IntegratorConfig(
            method=cfg.get("method", "midpoint"),
            dt=float(cfg.get("dt", 1e-2)),
            steps=int(cfg.get("steps", 100)),
            newton_tol=float(cfg.get("newton_tol", 1e-12)),
            newton_max_iter=int(cfg.get("newton_max_iter", 50)),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad integrator settings: {exc}", "integrator")


def run_simulate(doc: dict, seed: int) -> str:
    system = _build_sim_system(doc, seed)
    cfg = _integrator_config(doc)
    observables = {"H": system.hamiltonian, **system.observables}
    traj = integrate_flow(system.field, system.state0, cfg, observables)
    casimir_names = [n for n in observables if n != "H"]
    header = ["t", *system.labels, "H", *casimir_names]
    lines = [",".join(header)]
    for i, t in enumerate(traj.times):
        row = [t, *traj.states[i], traj.tracked["H"][i]]
        row += [traj.tracked[name][i] for name in casimir_names]
        lines.append(",".join(f"{v:.17e}" for v in row))
    return "\n".join(lines) + "\n"


def run_bracket_table(doc: dict) -> dict:
    system = _require(doc, "system")
    body = doc.get(system, doc.get("body", {}))
    if system == "extension":
        spec = _extension_spec_from_config(body)
    elif system == "restricted":
        spec = restricted.restricted_extension_spec(
            int(_require(body, "n_plus", "restricted")),
            int(_require(body, "n_minus", "restricted")),
        )
    elif system == "semidirect_qm":
        spec = quantum.semidirect_extension_spec(int(_require(body, "n", "semidirect_qm")))
    else:
        raise ConfigError(f"system {system!r} has no bracket table", "system")
    ext = build_extension(spec, force=bool(doc.get("force", False)))
    table = algebra_to_json(ext)
    table["compatibility"] = check_compatibility(spec).as_dict()
    return table


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _resolve_out(out: str | None) -> Path | None:
    if out is None:
        return None
    p = Path(out)
    env = os.environ.get("LIEPOISSON_OUTDIR")
    if env and not p.is_absolute():
        p = Path(env) / p
    if p.parent and not p.parent.exists():
        p.parent.mkdir(parents=True, exist_ok=True)
    return p


def _emit(text: str, out: str | None):
    p = _resolve_out(out)
    if p is None:
        sys.stdout.write(text)
    else:
        p.write_text(text)


def run_cli(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="liepoisson",
        description="Verify and integrate finite-dimensional Lie-Poisson systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run structural checks from a config, emit a JSON report"),
        ("simulate", "integrate the configured flow, emit a CSV trajectory"),
        ("bracket-table", "emit the structure constants of the built extension"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to a JSON config")
        p.add_argument("--out", default=None, help="write output to this file")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized draws")

    args = parser.parse_args(argv)
    try:
        doc = _load_config(args.config)
        if args.command == "verify":
            report, code = run_verify(doc, args.seed)
            _emit(json.dumps(report, indent=2, sort_keys=True) + "\n", args.out)
            if code != 0:
                for chk in report["checks"]:
                    if not chk["passed"]:
                        for key, value in sorted(chk["residuals"].items()):
                            if abs(value) >= chk["threshold"]:
                                print(
                                    f"verify: FAIL {chk['name']}: {key}="
                                    f"{value:.3e} exceeds {chk['threshold']:.1e}",
                                    file=sys.stderr,
                                )
            return code
        if args.command == "simulate":
            _emit(run_simulate(doc, args.seed), args.out)
            return 0
        _emit(
            json.dumps(run_bracket_table(doc), indent=2, sort_keys=True) + "\n",
            args.out,
        )
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LiePoissonError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    sys.exit(run_cli(argv))


if __name__ == "__main__":
    main()
