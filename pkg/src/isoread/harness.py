"""Training-free separation protocol, ablations, statistics and the ER runtime benchmark."""

from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from importlib import resources

import numpy as np
from scipy.special import betainc

from .encoder import EncoderConfig, encode, init_encoder
from .generators import (
    complete_graph,
    gen_cfi_pair,
    gen_cycle_pair,
    gen_er,
    gen_petersen,
    gen_rook4,
    gen_shrikhande,
    gm_switch,
)
from .graph import Graph, permute
from .readout import (
    READOUT_KINDS,
    BundleCache,
    ReadoutConfig,
    isotypic_readout,
    prepare_bundle,
    random_projection,
    readout,
)
from .rng import SplitMix64, derive_seed

DEFAULT_SEED = 20240917
DEFAULT_THRESHOLD = 0.95
DEFAULT_SEEDS = 5
CYCLE_KS = tuple(range(3, 15))
CYCLE_INSTANCES = 2
FAMILY_INSTANCES = 3
FAMILIES = ("cycles", "cfi-k3", "cfi-k4", "gm-petersen")
ZERO_RTOL = 1e-9
TIMING_FIELDS = ("bundle_seconds", "feature_seconds", "total_seconds")


def master_seed(default: int = DEFAULT_SEED) -> int:
    value = os.environ.get("ISOREAD_SEED")
    return int(value, 0) if value else default


# -- statistics --------------------------------------------------------------


def t_cdf(t: float, df: int) -> float:
    """Student t CDF via the regularized incomplete beta function."""
    if np.isinf(t):
        return 1.0 if t > 0 else 0.0
    t2 = t * t
    if t2 < df:
        # complementary form avoids cancellation near t = 0
        half = 0.5 * betainc(0.5, df / 2.0, t2 / (df + t2))
        return float(0.5 + half if t > 0 else 0.5 - half)
    tail = 0.5 * betainc(df / 2.0, 0.5, df / (df + t2))
    return float(tail if t < 0 else 1.0 - tail)


def one_sided_ttest(x, mu: float = 1.0) -> float | None:
    """p-value for H1: mean(x) < mu.  None with fewer than two samples."""
    x = np.asarray(x, dtype=np.float64)
    k = len(x)
    if k < 2:
        return None
    diff = float(x.mean()) - mu
    sd = float(x.std(ddof=1))
    if sd == 0.0:
        return 0.0 if diff < 0 else 1.0
    return t_cdf(diff / (sd / np.sqrt(k)), k - 1)


def holm_bonferroni(p_values, alpha: float = 0.05) -> list[bool]:
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must lie in (0, 1)")
    p = np.asarray(p_values, dtype=np.float64)
    m = len(p)
    reject = [False] * m
    for k, i in enumerate(np.argsort(p, kind="stable")):
        if p[i] <= alpha / (m - k):
            reject[i] = True
        else:
            break
    return reject


# -- cosine with the zero-norm rule ------------------------------------------


def cosine(z1, z2, scale1: float = 1.0, scale2: float = 1.0) -> tuple[float, str | None]:
    """Cosine of two embeddings.

    An embedding counts as zero when its norm is at most 1e-9 * max(scale, 1).
    Both zero gives 1.0 and exactly one zero gives 0.0; either case is flagged.
    """
    n1, n2 = float(np.linalg.norm(z1)), float(np.linalg.norm(z2))
    zero1 = n1 <= ZERO_RTOL * max(scale1, 1.0)
    zero2 = n2 <= ZERO_RTOL * max(scale2, 1.0)
    if zero1 and zero2:
        return 1.0, "both-zero"
    if zero1 or zero2:
        return 0.0, "one-zero"
    return float(np.dot(z1, z2) / (n1 * n2)), None


# -- pairs -------------------------------------------------------------------


@dataclass
class PairReport:
    pair_id: str
    family: str
    cosines: list
    mean_cosine: float
    separated: bool
    threshold: float
    p_value: float | None = None
    flags: list = field(default_factory=list)
    bundle_seconds: float = 0.0
    feature_seconds: float = 0.0
    total_seconds: float = 0.0
    error: str | None = None

    def row(self, timings: bool = True) -> dict:
        d = {
            "pair_id": self.pair_id,
            "family": self.family,
            "mean_cosine": self.mean_cosine,
            "separated": self.separated,
            "p_value": self.p_value,
            "flags": ";".join(sorted(set(self.flags))),
            "bundle_seconds": self.bundle_seconds,
            "feature_seconds": self.feature_seconds,
            "total_seconds": self.total_seconds,
            "error": self.error or "",
        }
        if not timings:
            for k in TIMING_FIELDS:
                d.pop(k)
        return d

    def as_dict(self, timings: bool = True) -> dict:
        d = asdict(self)
        if not timings:
            for k in TIMING_FIELDS:
                d.pop(k)
        return d


def _seed_task(g1, g2, b1, b2, enc_cfg, kind, cfg, task_seed):
    weights = init_encoder(replace(enc_cfg, seed=derive_seed(task_seed, 0)))
    R = random_projection(enc_cfg.width, cfg.rp_dim, derive_seed(task_seed, 3))
    zs, scales = [], []
    t0 = time.perf_counter()
    for side, (g, b) in enumerate(((g1, b1), (g2, b2))):
        pi = SplitMix64(derive_seed(task_seed, 1 + side)).permutation(g.n)
        M = encode(permute(g, pi), weights)
        bundle = b.transport(pi) if b is not None else None
        zs.append(readout(kind, M, bundle, cfg, R))
        scales.append(float(np.linalg.norm(M)))
    c, flag = cosine(zs[0], zs[1], *scales)
    return c, flag, time.perf_counter() - t0


def run_pair(
    g1: Graph,
    g2: Graph,
    encoder_cfg: EncoderConfig | None = None,
    readout_kind: str = "isotypic",
    readout_cfg: ReadoutConfig | None = None,
    seeds: int = DEFAULT_SEEDS,
    threshold: float = DEFAULT_THRESHOLD,
    *,
    master: int | None = None,
    pair_index: int = 0,
    pair_id: str = "pair",
    family: str = "",
    cache: BundleCache | None = None,
    workers: int = 1,
) -> PairReport:
    """Mean cosine of l2-normalized readouts over independent seeds.

    Each seed draws a fresh encoder and one fresh relabeling per graph.
    Projectors are computed once per graph in its base labeling and
    transported to each relabeling.
    """
    if not 0.0 < threshold <= 1.0:
        raise ValueError("threshold must lie in (0, 1]")
    if seeds < 1:
        raise ValueError("need at least one seed")
    if readout_kind not in READOUT_KINDS:
        raise ValueError(f"unknown readout {readout_kind!r}")
    encoder_cfg = encoder_cfg or EncoderConfig()
    cfg = readout_cfg or ReadoutConfig()
    master = master_seed() if master is None else master
    t_start = time.perf_counter()

    b1 = b2 = None
    if readout_kind.startswith("isotypic"):
        if cache is None:
            b1, b2 = prepare_bundle(g1, cfg), prepare_bundle(g2, cfg)
        else:
            b1, b2 = cache.get(g1, cfg), cache.get(g2, cfg)
    t_bundle = time.perf_counter() - t_start

    tasks = [derive_seed(master, pair_index, s) for s in range(seeds)]
    run = lambda ts: _seed_task(g1, g2, b1, b2, encoder_cfg, readout_kind, cfg, ts)  # noqa: E731
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(run, tasks))
    else:
        results = [run(ts) for ts in tasks]

    cos = [r[0] for r in results]
    mean = float(np.mean(cos))
    return PairReport(
        pair_id=pair_id,
        family=family,
        cosines=cos,
        mean_cosine=mean,
        separated=bool(mean < threshold),
        threshold=threshold,
        p_value=one_sided_ttest(cos),
        flags=[r[1] for r in results if r[1]],
        bundle_seconds=t_bundle,
        feature_seconds=float(sum(r[2] for r in results)),
        total_seconds=time.perf_counter() - t_start,
    )


# -- families ----------------------------------------------------------------


def gm_fixture() -> dict:
    text = resources.files("isoread").joinpath("data/gm_petersen.json").read_text(encoding="utf-8")
    return json.loads(text)


def gm_petersen_pair() -> tuple[Graph, Graph]:
    fixture = gm_fixture()
    if fixture.get("partition") is None:
        raise LookupError(f"no Godsil-McKay pair on the Petersen graph: {fixture['reason']}")
    g = gen_petersen()
    return g, gm_switch(g, fixture["partition"])


@dataclass(frozen=True)
class PairSpec:
    pair_id: str
    family: str
    build: object  # zero-argument callable returning (G, G')


def family_pairs(name: str) -> list[PairSpec]:
    if name == "cycles":
        return [
            PairSpec(f"cycles-k{k}-i{i}", name, lambda k=k: gen_cycle_pair(k))
            for k in CYCLE_KS
            for i in range(CYCLE_INSTANCES)
        ]
    if name == "cfi-k3":
        return [PairSpec(f"cfi-k3-i{i}", name, lambda: gen_cfi_pair(complete_graph(3))) for i in range(FAMILY_INSTANCES)]
    if name == "cfi-k4":
        return [PairSpec(f"cfi-k4-i{i}", name, lambda: gen_cfi_pair(complete_graph(4))) for i in range(FAMILY_INSTANCES)]
    if name == "gm-petersen":
        return [PairSpec(f"gm-petersen-i{i}", name, gm_petersen_pair) for i in range(FAMILY_INSTANCES)]
    if name == "srg16":
        return [PairSpec("srg16-shrikhande-rook", name, lambda: (gen_shrikhande(), gen_rook4()))]
    raise ValueError(f"unknown family {name!r}")


def suite_pairs(families=FAMILIES) -> list[PairSpec]:
    return [p for f in families for p in family_pairs(f)]


@dataclass
class SuiteReport:
    rows: list
    config: dict

    @property
    def total(self) -> int:
        return len(self.rows)

    @property
    def separated(self) -> int:
        return sum(r.separated for r in self.rows)

    def aggregates(self) -> dict:
        out = {}
        for fam in dict.fromkeys(r.family for r in self.rows):
            rs = [r for r in self.rows if r.family == fam]
            ok = [r.mean_cosine for r in rs if r.error is None]
            out[fam] = {
                "count": len(rs),
                "separated": sum(r.separated for r in rs),
                "errors": sum(r.error is not None for r in rs),
                "mean_cosine": float(np.mean(ok)) if ok else None,
                "max_cosine": float(np.max(ok)) if ok else None,
            }
        return out

    def to_json(self, timings: bool = True) -> str:
        rows = [r.as_dict(timings) for r in self.rows]
        return json.dumps(
            {"config": self.config, "aggregates": self.aggregates(), "pairs": rows},
            indent=2,
            allow_nan=False,
        )

    def to_csv(self, timings: bool = True) -> str:
        buf = io.StringIO()
        fields = list(PairReport("", "", [], 0.0, False, 1.0).row(timings))
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\r\n")
        w.writeheader()
        for r in self.rows:
            w.writerow(r.row(timings))
        return buf.getvalue()

    def table(self) -> str:
        lines = [f"{'family':<14}{'pairs':>6}{'sep':>5}{'err':>5}{'mean cos':>10}{'max cos':>10}"]
        for fam, a in self.aggregates().items():
            mean = "-" if a["mean_cosine"] is None else f"{a['mean_cosine']:.3f}"
            mx = "-" if a["max_cosine"] is None else f"{a['max_cosine']:.3f}"
            lines.append(f"{fam:<14}{a['count']:>6}{a['separated']:>5}{a['errors']:>5}{mean:>10}{mx:>10}")
        lines.append(f"{'total':<14}{self.total:>6}{self.separated:>5}")
        return "\n".join(lines)


def _error_report(spec: PairSpec, threshold: float, exc: Exception) -> PairReport:
    return PairReport(
        pair_id=spec.pair_id,
        family=spec.family,
        cosines=[],
        mean_cosine=1.0,
        separated=False,
        threshold=threshold,
        error=f"{type(exc).__name__}: {exc}",
    )


def run_suite(
    families=FAMILIES,
    encoder_cfg: EncoderConfig | None = None,
    readout_kind: str = "isotypic",
    readout_cfg: ReadoutConfig | None = None,
    seeds: int = DEFAULT_SEEDS,
    threshold: float = DEFAULT_THRESHOLD,
    *,
    master: int | None = None,
    workers: int = 1,
    cache: BundleCache | None = None,
) -> SuiteReport:
    """Run every pair of the requested families; per-pair failures are recorded, not raised."""
    encoder_cfg = encoder_cfg or EncoderConfig()
    cfg = readout_cfg or ReadoutConfig()
    master = master_seed() if master is None else master
    cache = cache if cache is not None else BundleCache()
    specs = suite_pairs(families)

    def one(item):
        idx, spec = item
        try:
            g1, g2 = spec.build()
        except Exception as exc:  # suite keeps going
            return _error_report(spec, threshold, exc)
        return run_pair(
            g1, g2, encoder_cfg, readout_kind, cfg, seeds, threshold,
            master=master, pair_index=idx, pair_id=spec.pair_id, family=spec.family, cache=cache,
        )

    items = list(enumerate(specs))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            rows = list(ex.map(one, items))
    else:
        rows = [one(it) for it in items]
    config = {
        "families": list(families),
        "readout": readout_kind,
        "seeds": seeds,
        "threshold": threshold,
        "master_seed": master,
        "encoder": asdict(encoder_cfg),
        "readout_config": asdict(cfg),
    }
    return SuiteReport(rows, config)


def block_sweep(
    blocks=(1, 2, 4, 8, 16),
    families=FAMILIES,
    seeds: int = 1,
    readout_kind: str = "isotypic",
    readout_cfg: ReadoutConfig | None = None,
    **kw,
) -> dict[int, int]:
    """Separated-pair count for each max_blocks value, all else fixed."""
    cfg = readout_cfg or ReadoutConfig()
    out = {}
    for B in blocks:
        if B < 1:
            raise ValueError("block counts must be positive")
        rep = run_suite(families, readout_kind=readout_kind, readout_cfg=replace(cfg, max_blocks=B), seeds=seeds, **kw)
        out[B] = rep.separated
    return out


# -- runtime benchmark --------------------------------------------------------

BENCH_FIELDS = [
    "n", "count", "capped",
    "median_bundle", "p90_bundle",
    "median_features", "p90_features",
    "median_total", "p90_total",
]


def bench_er(ns, p: float = 0.1, count: int = 20, seed: int = DEFAULT_SEED, readout_cfg=None, encoder_cfg=None):
    """Per n: time bundle construction and feature extraction on ER graphs; returns (rows, csv)."""
    cfg = readout_cfg or ReadoutConfig()
    enc = encoder_cfg or EncoderConfig()
    weights = init_encoder(replace(enc, seed=derive_seed(seed, 0)))
    R = random_projection(enc.width, cfg.rp_dim, derive_seed(seed, 1))
    rows = []
    for n in ns if count > 0 else []:
        tb, tf, capped = [], [], 0
        for i in range(count):
            g = gen_er(n, p, derive_seed(seed, n, i))
            t0 = time.perf_counter()
            bundle = prepare_bundle(g, cfg)
            t1 = time.perf_counter()
            isotypic_readout(bundle, encode(g, weights), cfg, R)
            t2 = time.perf_counter()
            tb.append(t1 - t0)
            tf.append(t2 - t1)
            capped += bundle.capped
        tt = np.add(tb, tf)
        rows.append({
            "n": n, "count": count, "capped": capped,
            "median_bundle": float(np.median(tb)), "p90_bundle": float(np.percentile(tb, 90)),
            "median_features": float(np.median(tf)), "p90_features": float(np.percentile(tf, 90)),
            "median_total": float(np.median(tt)), "p90_total": float(np.percentile(tt, 90)),
        })
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\r\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (f"{v:.6f}" if isinstance(v, float) else v) for k, v in r.items()})
    return rows, buf.getvalue()
