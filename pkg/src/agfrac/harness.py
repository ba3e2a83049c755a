"""Experiment engine: build instances from config, corrupt, decode, report.

Reproducibility contract: a config plus its master seed fully determines every
output byte.  Randomness comes from a SHA-256 counter generator (stable across
platforms and Python versions) with per-trial streams derived from
(seed, decoder, weight, trial), so every trial is independent of execution
order: ``run_trial`` is pure given those four values and trials can be farmed
out to workers without changing any aggregate.  Wall-clock times are kept on
the in-memory trial records but never written to the CSV or the JSON sidecar.

Download accounting: a received word is handed to decoders only through
``ReceivedWord``, which counts base-field symbols released.  Projecting
releases m*n symbols (the matrix pi(w)); reading the word in full, as the
baseline decoder must, releases l*n.

Outcome classification per trial, against the known transmitted word:
``success`` (returned word equals it), ``failure`` (the decoder raised),
``miscorrection-detected`` (a decoder guard raised), and ``wrong-result``
(the decoder returned a different word; counted as a miscorrection in the
CSV aggregates).
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from dataclasses import dataclass, field as dataclass_field

from .code import DecodeFailure, EvalCode, MiscorrectionDetected
from .curve import CurveModel
from .field import ExtensionTower, parse_field_spec
from .fractional import (FractionalSpec, fractional_decode, project_received,
                         radius_report)
from .interleaved import CollabConfig, collab_decode

CSV_COLUMNS = ("decoder", "weight", "trials", "successes", "failures",
               "miscorrections", "downloaded_symbols", "fraction")


class SeedStream:
    """Deterministic random stream: SHA-256 over (key, counter)."""

    def __init__(self, *parts):
        self._key = ":".join(str(p) for p in parts)
        self._counter = 0

    def child(self, *parts) -> "SeedStream":
        return SeedStream(self._key, *parts)

    def _next_int(self) -> int:
        digest = hashlib.sha256(f"{self._key}#{self._counter}".encode()).digest()
        self._counter += 1
        return int.from_bytes(digest, "big")

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("bound must be positive")
        return self._next_int() % n

    def nonzero_below(self, n: int) -> int:
        return 1 + self.below(n - 1)

    def distinct(self, count: int, n: int) -> list[int]:
        """``count`` distinct values from range(n), by partial Fisher-Yates."""
        if count > n:
            raise ValueError("cannot draw more distinct values than the range holds")
        pool = list(range(n))
        for i in range(count):
            j = i + self.below(n - i)
            pool[i], pool[j] = pool[j], pool[i]
        return pool[:count]


class ReceivedWord:
    """Access-counting wrapper around a received word over the extension field."""

    def __init__(self, word, spec: FractionalSpec):
        if len(word) != spec.n:
            raise ValueError("received word has the wrong length")
        self._word = list(word)
        self._spec = spec
        self.downloaded_symbols = 0

    def project(self) -> list[list[int]]:
        """Download pi(w): m*n base-field symbols."""
        self.downloaded_symbols += self._spec.m * self._spec.n
        return project_received(self._spec, self._word)

    def read_full(self) -> list[int]:
        """Download the whole word: l*n base-field symbols."""
        self.downloaded_symbols += self._spec.l * self._spec.n
        return list(self._word)


def corrupt(word, weight: int, field, rng: SeedStream, model: str = "uniform",
            spec: FractionalSpec | None = None) -> list[int]:
    """Alter exactly ``weight`` distinct positions by random nonzero offsets.

    The ``common-positions`` model additionally resamples each offset until
    every projected row sees a nonzero error at that column, so all rows of
    pi share one error position set (the case interleaving profits from);
    it needs ``spec`` to evaluate the projections.
    """
    word = list(word)
    n = len(word)
    if not (0 <= weight <= n):
        raise ValueError("error weight must lie in [0, n]")
    if model not in ("uniform", "common-positions"):
        raise ValueError(f"unknown error model {model!r}")
    if model == "common-positions" and spec is None:
        raise ValueError("the common-positions model needs the fractional spec")
    positions = sorted(rng.distinct(weight, n))
    for i in positions:
        for _ in range(10000):
            offset = rng.nonzero_below(field.order)
            if model == "uniform" or _hits_every_row(spec, i, offset):
                break
        else:  # pragma: no cover
            raise RuntimeError("could not sample a full-column error offset")
        word[i] = field.add(word[i], offset)
    return word


def _hits_every_row(spec: FractionalSpec, position: int, offset: int) -> bool:
    zero = spec.base.zero
    return all(c != zero for c in spec.project_offset(position, offset))


# ---------------------------------------------------------------------------
# configuration

@dataclass
class ExperimentConfig:
    field: str
    curve: dict
    extension_degree: int
    beta: int
    partition: dict                       # {"z": "x"|"y", "parts": [[values]]}
    weights: list
    trials: int
    seed: int
    decoder: str = "fractional"           # fractional | interleaved | both
    error_model: str = "uniform"          # uniform | common-positions
    field_polynomial: list | None = None
    tower_polynomial: list | None = None
    basis: list | None = None
    locator_excess: int | None = None     # interleaved; default: guaranteed radius
    include_baseline: bool = True
    output: dict = dataclass_field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        if "weights" not in data and "weight_range" in data:
            lo, hi = data.pop("weight_range")
            data["weights"] = list(range(int(lo), int(hi) + 1))
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        missing = {"field", "curve", "extension_degree", "beta", "partition",
                   "weights", "trials", "seed"} - set(data)
        if missing:
            raise ValueError(f"missing config keys: {sorted(missing)}")
        return cls(**data)

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def to_dict(self) -> dict:
        return {
            "field": self.field,
            "field_polynomial": self.field_polynomial,
            "curve": self.curve,
            "extension_degree": self.extension_degree,
            "tower_polynomial": self.tower_polynomial,
            "basis": self.basis,
            "beta": self.beta,
            "partition": self.partition,
            "decoder": self.decoder,
            "error_model": self.error_model,
            "weights": list(self.weights),
            "trials": self.trials,
            "seed": self.seed,
            "locator_excess": self.locator_excess,
            "include_baseline": self.include_baseline,
            "output": dict(self.output),
        }

    def validate(self):
        if self.decoder not in ("fractional", "interleaved", "both"):
            raise ValueError(f"unknown decoder selection {self.decoder!r}")
        if self.error_model not in ("uniform", "common-positions"):
            raise ValueError(f"unknown error model {self.error_model!r}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.weights:
            raise ValueError("weights must be nonempty")
        if any(int(w) < 0 for w in self.weights):
            raise ValueError("weights must be nonnegative")
        if self.extension_degree < 2:
            raise ValueError("extension degree must be at least 2")


@dataclass
class Instance:
    config: ExperimentConfig
    curve: CurveModel
    tower: ExtensionTower
    code: EvalCode          # over the extension field
    spec: FractionalSpec


@dataclass
class TrialRecord:
    decoder: str
    weight: int
    seed_key: str
    positions: tuple
    outcome: str
    downloaded_symbols: int
    wall_time: float


def make_curve(curve_spec: dict) -> CurveModel:
    kind = curve_spec.get("model")
    if kind == "hermitian":
        return CurveModel.hermitian(int(curve_spec["q0"]))
    if kind == "kummer":
        fld = parse_field_spec(curve_spec["field"], curve_spec.get("field_polynomial"))
        frob = int(curve_spec.get("frobenius_base", fld.char))
        return CurveModel(fld, int(curve_spec["u"]), frob, curve_spec["L"])
    raise ValueError(f"unknown curve model {curve_spec.get('model')!r}")


def build_instance(config: ExperimentConfig) -> Instance:
    config.validate()
    curve = make_curve(self_consistent_curve(config))
    base = parse_field_spec(config.field, config.field_polynomial)
    if base != curve.field:
        raise ValueError(
            f"config field GF({base.order}) does not match the curve's "
            f"field GF({curve.field.order})")
    tower = ExtensionTower(base, config.extension_degree, basis=config.basis,
                           modulus=config.tower_polynomial)
    points = curve.affine_points()
    code = EvalCode(curve, tower.ext, points, config.beta)
    spec = FractionalSpec(tower, code, config.partition["z"],
                          config.partition["parts"])
    n = code.n
    if any(int(w) > n for w in config.weights):
        raise ValueError(f"error weight beyond the code length {n}")
    return Instance(config=config, curve=curve, tower=tower, code=code, spec=spec)


def self_consistent_curve(config: ExperimentConfig) -> dict:
    spec = dict(config.curve)
    if spec.get("model") == "kummer":
        spec.setdefault("field", config.field)
        spec.setdefault("field_polynomial", config.field_polynomial)
    return spec


def describe(config: ExperimentConfig) -> str:
    inst = build_instance(config)
    spec = inst.spec
    report = radius_report(spec)
    lines = [
        f"curve: {inst.curve!r}",
        f"base field: GF({spec.base.order}), extension field: GF({spec.tower.ext.order})",
        f"n = {spec.n}, k = {spec.k}, g = {inst.curve.genus}",
        f"l = {spec.l}, m = {spec.m}, beta = {inst.code.beta}",
        f"beta_t = {list(spec.plan.betas)}",
        f"radii: designed = {report['designed']}, "
        f"half-distance = {report['half_distance']}, "
        f"guaranteed = {report['guaranteed']}",
        f"bandwidth: {report['downloaded_symbols']} of {report['baseline_symbols']} "
        f"base symbols (fraction {spec.m}/{spec.l})",
        f"information set: {list(spec.plan.info_set)}",
    ]
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# the experiment loop

def _decoder_names(config: ExperimentConfig) -> list[str]:
    if config.decoder == "both":
        names = ["fractional", "interleaved"]
    else:
        names = [config.decoder]
    if config.include_baseline:
        names.append("baseline")
    return names


def run_trial(inst: Instance, decoder: str, weight: int, trial: int) -> TrialRecord:
    config = inst.config
    spec = inst.spec
    ext = spec.tower.ext
    rng = SeedStream(config.seed, decoder, weight, trial)
    message = [rng.below(ext.order) for _ in range(inst.code.k)]
    transmitted = inst.code.encode(message)
    corrupted = corrupt(transmitted, weight, ext, rng, config.error_model, spec)
    positions = tuple(i for i, (a, b) in enumerate(zip(corrupted, transmitted))
                      if a != b)
    received = ReceivedWord(corrupted, spec)
    start = time.perf_counter()
    try:
        if decoder == "fractional":
            word, _ = fractional_decode(spec, received.project())
        elif decoder == "interleaved":
            t_prime = (config.locator_excess if config.locator_excess is not None
                       else spec.radii["guaranteed"])
            word, _ = collab_decode(CollabConfig.for_spec(spec, t_prime),
                                    received.project())
        elif decoder == "baseline":
            word, _ = inst.code.decode_basic(received.read_full())
        else:
            raise ValueError(f"unknown decoder {decoder!r}")
        outcome = "success" if word == transmitted else "wrong-result"
    except MiscorrectionDetected:
        outcome = "miscorrection-detected"
    except DecodeFailure:
        outcome = "failure"
    wall = time.perf_counter() - start
    return TrialRecord(decoder=decoder, weight=weight,
                       seed_key=f"{config.seed}:{decoder}:{weight}:{trial}",
                       positions=positions, outcome=outcome,
                       downloaded_symbols=received.downloaded_symbols,
                       wall_time=wall)


def run_experiment(config: ExperimentConfig, out_csv=None, out_json=None):
    """Run all trials; returns aggregate rows and optionally writes CSV/JSON.

    The CSV (fixed column order, '\\n' line endings) and the JSON sidecar
    (config echo, sorted keys) are byte-identical across runs of the same
    config and seed.
    """
    inst = build_instance(config)
    spec = inst.spec
    aggregates = []
    for decoder in _decoder_names(config):
        for weight in [int(w) for w in config.weights]:
            counts = {"success": 0, "failure": 0, "miscorrection-detected": 0,
                      "wrong-result": 0}
            downloads = set()
            for trial in range(config.trials):
                record = run_trial(inst, decoder, weight, trial)
                counts[record.outcome] += 1
                downloads.add(record.downloaded_symbols)
            assert len(downloads) == 1
            downloaded = downloads.pop()
            aggregates.append({
                "decoder": decoder,
                "weight": weight,
                "trials": config.trials,
                "successes": counts["success"],
                "failures": counts["failure"],
                "miscorrections": counts["miscorrection-detected"] + counts["wrong-result"],
                "downloaded_symbols": downloaded,
                "fraction": f"{downloaded / (spec.l * spec.n):.6f}",
            })
    if out_csv is not None:
        with open(out_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_csv(aggregates))
    if out_json is not None:
        with open(out_json, "w", encoding="utf-8", newline="") as fh:
            fh.write(render_sidecar(config))
    return aggregates


def render_csv(aggregates) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in aggregates:
        writer.writerow({col: row[col] for col in CSV_COLUMNS})
    return buf.getvalue()


def render_sidecar(config: ExperimentConfig) -> str:
    return json.dumps({"config": config.to_dict()}, indent=2, sort_keys=True) + "\n"
