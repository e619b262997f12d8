"""Scenario configuration files.

A scenario is a TOML document::

    id = "imbalanced-blobs"
    heuristics = ["BALD", "Random"]
    seeds = [0, 1, 2]
    output_dir = "runs/imbalanced-blobs"

    [dataset.blobs]            # or [dataset.idx] with images/labels paths
    n_per_class = 200
    n_test_per_class = 100
    classes = 8
    dim = 5
    spread = 0.25

    [dataset.imbalance]        # optional
    delta = 3
    keep_fraction = 0.25

    [dataset.noise]            # optional
    lambda = 0.05

    [model]
    hidden = [64]
    dropout = 0.5

    [train]
    epochs = 100
    batch_size = 32
    learning_rate = 0.05
    momentum = 0.9

    [loop]
    initial_labels = 50
    query_size = 10
    mc_samples = 20
    pool_limit = -1            # -1: score the whole pool
    label_budget = 250

``dump_config`` writes this canonical form; ``load_config(dump_config(c)) == c``.
"""
from dataclasses import dataclass, field, fields, replace

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
import tomli_w

from ..acquisition import HEURISTICS
from ..errors import ConfigError
from ..model import TrainConfig

NO_LIMIT = -1


@dataclass(frozen=True)
class BlobsSource:
    n_per_class: int = 200
    n_test_per_class: int = 100
    classes: int = 8
    dim: int = 5
    spread: float = 0.25


@dataclass(frozen=True)
class IdxSource:
    images: str
    labels: str
    test_images: str | None = None
    test_labels: str | None = None
    limit: int | None = None
    test_limit: int | None = None
    classes: int | None = None
    n_test_per_class: int = 100  # used only when no test files are given


@dataclass(frozen=True)
class DatasetConfig:
    source: BlobsSource | IdxSource = field(default_factory=BlobsSource)
    noise_lambda: float | None = None
    imbalance_delta: int | None = None
    keep_fraction: float = 0.25


@dataclass(frozen=True)
class ModelConfig:
    hidden: tuple = (64,)
    dropout: float = 0.5


@dataclass(frozen=True)
class LoopBlock:
    initial_labels: int = 50
    query_size: int = 10
    mc_samples: int = 20
    pool_limit: int = NO_LIMIT
    label_budget: int = 250


@dataclass(frozen=True)
class ScenarioConfig:
    id: str = "scenario"
    heuristics: tuple = ("BALD", "Random")
    seeds: tuple = (0,)
    output_dir: str = "results"
    dataset: DatasetConfig = field(default_factory=DatasetConfig)
    model: ModelConfig = field(default_factory=ModelConfig)
    train: TrainConfig = field(default_factory=TrainConfig)
    loop: LoopBlock = field(default_factory=LoopBlock)


class _Block:
    """Typed, path-aware access to one table of the parsed document."""

    def __init__(self, data, path):
        if not isinstance(data, dict):
            raise ConfigError("expected a table", path or "<root>")
        self.data = dict(data)
        self.path = path

    def _p(self, key):
        return f"{self.path}.{key}" if self.path else key

    def get(self, key, kind, default=None, required=False):
        if key not in self.data:
            if required:
                raise ConfigError("missing required field", self._p(key))
            return default
        value = self.data.pop(key)
        if kind is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if (kind is int and isinstance(value, bool)) or not isinstance(value, kind):
            raise ConfigError(f"expected {kind.__name__}, got {type(value).__name__}", self._p(key))
        return value

    def get_list(self, key, kind, default=None, required=False):
        value = self.get(key, list, default, required)
        if value is default:
            return default
        for i, item in enumerate(value):
            if not isinstance(item, kind) or isinstance(item, bool):
                raise ConfigError(f"expected a list of {kind.__name__}", f"{self._p(key)}[{i}]")
        return tuple(value)

    def sub(self, key, required=False):
        if key not in self.data:
            if required:
                raise ConfigError("missing required table", self._p(key))
            return None
        return _Block(self.data.pop(key), self._p(key))

    def done(self):
        if self.data:
            raise ConfigError("unknown field", self._p(sorted(self.data)[0]))


def _positive(value, path, minimum=1):
    if value is not None and value < minimum:
        raise ConfigError(f"must be >= {minimum}", path)
    return value


def _parse_dataset(block):
    blobs, idx = block.sub("blobs"), block.sub("idx")
    if (blobs is None) == (idx is None):
        raise ConfigError("exactly one of [dataset.blobs] or [dataset.idx] is required", "dataset")
    if blobs is not None:
        d = BlobsSource()
        source = BlobsSource(
            n_per_class=_positive(blobs.get("n_per_class", int, d.n_per_class), "dataset.blobs.n_per_class", 0),
            n_test_per_class=_positive(blobs.get("n_test_per_class", int, d.n_test_per_class),
                                       "dataset.blobs.n_test_per_class"),
            classes=_positive(blobs.get("classes", int, d.classes), "dataset.blobs.classes", 2),
            dim=_positive(blobs.get("dim", int, d.dim), "dataset.blobs.dim", 2),
            spread=blobs.get("spread", float, d.spread),
        )
        if source.spread < 0:
            raise ConfigError("must be >= 0", "dataset.blobs.spread")
        blobs.done()
    else:
        source = IdxSource(
            images=idx.get("images", str, required=True),
            labels=idx.get("labels", str, required=True),
            test_images=idx.get("test_images", str),
            test_labels=idx.get("test_labels", str),
            limit=_positive(idx.get("limit", int), "dataset.idx.limit"),
            test_limit=_positive(idx.get("test_limit", int), "dataset.idx.test_limit"),
            classes=_positive(idx.get("classes", int), "dataset.idx.classes", 2),
            n_test_per_class=_positive(idx.get("n_test_per_class", int, 100), "dataset.idx.n_test_per_class"),
        )
        if (source.test_images is None) != (source.test_labels is None):
            raise ConfigError("test_images and test_labels go together", "dataset.idx")
        idx.done()

    noise_lambda = None
    noise = block.sub("noise")
    if noise is not None:
        noise_lambda = noise.get("lambda", float, required=True)
        if not 0.0 <= noise_lambda <= 1.0:
            raise ConfigError("must lie in [0, 1]", "dataset.noise.lambda")
        noise.done()
    delta, keep = None, 0.25
    imbalance = block.sub("imbalance")
    if imbalance is not None:
        delta = _positive(imbalance.get("delta", int, required=True), "dataset.imbalance.delta", 0)
        keep = imbalance.get("keep_fraction", float, 0.25)
        if not 0.0 < keep <= 1.0:
            raise ConfigError("must lie in (0, 1]", "dataset.imbalance.keep_fraction")
        classes = source.classes
        if classes is not None and delta > classes:
            raise ConfigError(f"cannot exceed the class count {classes}", "dataset.imbalance.delta")
        imbalance.done()
    block.done()
    return DatasetConfig(source, noise_lambda, delta, keep)


def config_from_dict(data):
    root = _Block(data, "")
    cfg = ScenarioConfig()
    scenario_id = root.get("id", str, cfg.id)
    heuristics = root.get_list("heuristics", str, required=True)
    if not heuristics:
        raise ConfigError("need at least one heuristic", "heuristics")
    for i, h in enumerate(heuristics):
        if h not in HEURISTICS:
            raise ConfigError(f"unknown heuristic {h!r}; expected one of {HEURISTICS}", f"heuristics[{i}]")
    if len(set(heuristics)) != len(heuristics):
        raise ConfigError("duplicate heuristic", "heuristics")
    seeds = root.get_list("seeds", int, required=True)
    if not seeds:
        raise ConfigError("need at least one seed", "seeds")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("duplicate seed", "seeds")
    output_dir = root.get("output_dir", str, cfg.output_dir)
    dataset = _parse_dataset(root.sub("dataset", required=True))

    model = root.sub("model")
    model_cfg = cfg.model
    if model is not None:
        hidden = model.get_list("hidden", int, cfg.model.hidden)
        for i, h in enumerate(hidden):
            _positive(h, f"model.hidden[{i}]")
        dropout = model.get("dropout", float, cfg.model.dropout)
        if not 0.0 <= dropout < 1.0:
            raise ConfigError("must lie in [0, 1)", "model.dropout")
        model.done()
        model_cfg = ModelConfig(tuple(hidden), dropout)

    train = root.sub("train")
    train_cfg = cfg.train
    if train is not None:
        d = cfg.train
        train_cfg = TrainConfig(
            epochs=_positive(train.get("epochs", int, d.epochs), "train.epochs", 0),
            batch_size=_positive(train.get("batch_size", int, d.batch_size), "train.batch_size"),
            learning_rate=train.get("learning_rate", float, d.learning_rate),
            momentum=train.get("momentum", float, d.momentum),
            seed=train.get("seed", int, d.seed),
        )
        train.done()

    loop = root.sub("loop")
    loop_cfg = cfg.loop
    if loop is not None:
        d = cfg.loop
        loop_cfg = LoopBlock(
            initial_labels=_positive(loop.get("initial_labels", int, d.initial_labels), "loop.initial_labels"),
            query_size=_positive(loop.get("query_size", int, d.query_size), "loop.query_size"),
            mc_samples=_positive(loop.get("mc_samples", int, d.mc_samples), "loop.mc_samples"),
            pool_limit=loop.get("pool_limit", int, d.pool_limit),
            label_budget=loop.get("label_budget", int, d.label_budget),
        )
        if loop_cfg.pool_limit < NO_LIMIT:
            raise ConfigError("must be -1 (no limit) or >= 0", "loop.pool_limit")
        if loop_cfg.label_budget < loop_cfg.initial_labels:
            raise ConfigError("must be >= initial_labels", "loop.label_budget")
        loop.done()
    root.done()
    return ScenarioConfig(scenario_id, heuristics, seeds, output_dir, dataset, model_cfg, train_cfg, loop_cfg)


def _drop_none(d):
    return {k: v for k, v in d.items() if v is not None}


def config_to_dict(cfg):
    ds = cfg.dataset
    dataset = {}
    if isinstance(ds.source, BlobsSource):
        dataset["blobs"] = {f.name: getattr(ds.source, f.name) for f in fields(BlobsSource)}
    else:
        dataset["idx"] = _drop_none({f.name: getattr(ds.source, f.name) for f in fields(IdxSource)})
    if ds.noise_lambda is not None:
        dataset["noise"] = {"lambda": ds.noise_lambda}
    if ds.imbalance_delta is not None:
        dataset["imbalance"] = {"delta": ds.imbalance_delta, "keep_fraction": ds.keep_fraction}
    return {
        "id": cfg.id,
        "heuristics": list(cfg.heuristics),
        "seeds": list(cfg.seeds),
        "output_dir": cfg.output_dir,
        "dataset": dataset,
        "model": {"hidden": list(cfg.model.hidden), "dropout": cfg.model.dropout},
        "train": {f.name: getattr(cfg.train, f.name) for f in fields(TrainConfig)},
        "loop": {f.name: getattr(cfg.loop, f.name) for f in fields(LoopBlock)},
    }


def parse_config(text):
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"not valid TOML: {exc}") from exc
    return config_from_dict(data)


def load_config(path):
    with open(path, "rb") as f:
        raw = f.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError(f"{path} is not UTF-8") from exc
    return parse_config(text)


def dump_config(cfg):
    return tomli_w.dumps(config_to_dict(cfg))


def with_overrides(cfg, seeds=None, output_dir=None):
    if seeds is not None:
        if not seeds:
            raise ConfigError("need at least one seed", "seeds")
        cfg = replace(cfg, seeds=tuple(seeds))
    if output_dir is not None:
        cfg = replace(cfg, output_dir=str(output_dir))
    return cfg
