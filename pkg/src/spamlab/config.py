"""Pipeline configuration: an INI file with one section per stage.

Example (every key optional; these are the defaults)::

    [data]
    path = <bundled synthetic corpus>
    format = csv            ; csv | eml-dir | mbox
    include_subject = true

    [preprocess]
    lowercase = true
    remove_stopwords = true
    remove_numbers = true
    remove_punct = true
    use_lemmas = true
    stopwords =             ; path to a stop word file, empty = bundled list
    lemma_rules =           ; path to a rules file, empty = bundled rules

    [features]
    min_df = 2
    max_size = 10000        ; 0 or "none" = no cap
    representation = count  ; count | binary | tf

    [split]
    fraction = 0.75
    seed = 0
    stratified = true

    [models]
    select = nb, c45, mlp

    [nb]
    alpha = 1.0

    [c45]
    min_samples_leaf = 2
    max_depth = none
    prune = true
    confidence = 0.25

    [mlp]
    hidden_dims = 64        ; comma separated
    activation = sigmoid    ; sigmoid | relu
    learning_rate = 0.05
    epochs = 30
    batch_size = 32
    seed =                  ; empty = same as [split] seed

    [output]
    dir = out
"""

from __future__ import annotations

import configparser
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .c45 import C45Config
from .corpus import SplitSpec
from .errors import ConfigError
from .features import Representation
from .pipeline import MODEL_KINDS, ModelSettings
from .preprocess import PreprocessConfig

FORMATS = ("csv", "eml-dir", "mbox")


def bundled_corpus_path() -> Path:
    return Path(str(resources.files("spamlab.data").joinpath("synthetic.csv")))


@dataclass(frozen=True)
class PipelineConfig:
    data_path: Path = field(default_factory=bundled_corpus_path)
    data_format: str = "csv"
    include_subject: bool = True
    preprocess: PreprocessConfig = PreprocessConfig()
    stopwords_path: Path | None = None
    lemma_rules_path: Path | None = None
    min_df: int = 2
    max_size: int | None = 10000
    representation: Representation = Representation.COUNT
    split: SplitSpec = SplitSpec()
    models: tuple = MODEL_KINDS
    settings: ModelSettings = ModelSettings()
    output_dir: Path = Path("out")

    def __post_init__(self):
        if not self.models:
            raise ConfigError("select at least one model")
        bad = [m for m in self.models if m not in MODEL_KINDS]
        if bad:
            raise ConfigError(f"unknown model(s) {bad}; choose from {', '.join(MODEL_KINDS)}")
        if self.data_format not in FORMATS:
            raise ConfigError(f"unknown data format {self.data_format!r}; choose from {', '.join(FORMATS)}")


def _opt_int(value: str) -> int | None:
    value = value.strip().lower()
    if value in ("", "none", "0"):
        return None
    return int(value)


def load_config(path: str | Path | None = None, overrides: dict | None = None) -> PipelineConfig:
    """Read an INI config (or start from defaults) and apply flat overrides.

    Override keys: data_path, data_format, seed, models, output_dir.
    """
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    base = Path(".")
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        cp.read(path, encoding="utf-8")
        base = path.parent
    try:
        return _from_parser(cp, base, overrides or {})
    except (ValueError, configparser.Error) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid config: {exc}") from None


def _from_parser(cp, base: Path, overrides: dict) -> PipelineConfig:
    def get(section, key, default=""):
        return cp.get(section, key, fallback=default).strip()

    def getbool(section, key, default):
        return cp.getboolean(section, key, fallback=default)

    def rel(p):
        return None if not p else (base / p if not Path(p).is_absolute() else Path(p))

    cfg = PipelineConfig()
    data_path = rel(get("data", "path")) or cfg.data_path
    pre = PreprocessConfig(
        lowercase=getbool("preprocess", "lowercase", True),
        remove_stopwords=getbool("preprocess", "remove_stopwords", True),
        remove_numbers=getbool("preprocess", "remove_numbers", True),
        remove_punct=getbool("preprocess", "remove_punct", True),
        use_lemmas=getbool("preprocess", "use_lemmas", True),
    )
    seed = int(overrides.get("seed") if overrides.get("seed") is not None else get("split", "seed", "0"))
    split = SplitSpec(
        train_fraction=float(get("split", "fraction", "0.75")),
        seed=seed,
        stratified=getbool("split", "stratified", True),
    )
    mlp_seed = get("mlp", "seed")
    if overrides.get("seed") is not None or not mlp_seed:
        mlp_seed = seed
    settings = ModelSettings(
        nb_alpha=float(get("nb", "alpha", "1.0")),
        c45=C45Config(
            min_samples_leaf=int(get("c45", "min_samples_leaf", "2")),
            max_depth=_opt_int(get("c45", "max_depth", "none")),
            prune=getbool("c45", "prune", True),
            confidence=float(get("c45", "confidence", "0.25")),
        ),
        mlp_hidden=tuple(int(h) for h in get("mlp", "hidden_dims", "64").split(",") if h.strip()),
        mlp_activation=get("mlp", "activation", "sigmoid"),
        mlp_learning_rate=float(get("mlp", "learning_rate", "0.05")),
        mlp_epochs=int(get("mlp", "epochs", "30")),
        mlp_batch_size=int(get("mlp", "batch_size", "32")),
        mlp_seed=int(mlp_seed),
    )
    models = tuple(m.strip() for m in get("models", "select", ",".join(MODEL_KINDS)).split(",") if m.strip())
    cfg = PipelineConfig(
        data_path=data_path,
        data_format=get("data", "format", "csv"),
        include_subject=getbool("data", "include_subject", True),
        preprocess=pre,
        stopwords_path=rel(get("preprocess", "stopwords")),
        lemma_rules_path=rel(get("preprocess", "lemma_rules")),
        min_df=int(get("features", "min_df", "2")),
        max_size=_opt_int(get("features", "max_size", "10000")),
        representation=Representation(get("features", "representation", "count")),
        split=split,
        models=models,
        settings=settings,
        output_dir=rel(get("output", "dir")) or Path("out"),
    )
    changes = {}
    if overrides.get("data_path"):
        changes["data_path"] = Path(overrides["data_path"])
    if overrides.get("data_format"):
        changes["data_format"] = overrides["data_format"]
    if overrides.get("models"):
        changes["models"] = tuple(dict.fromkeys(overrides["models"]))
    if overrides.get("output_dir"):
        changes["output_dir"] = Path(overrides["output_dir"])
    return replace(cfg, **changes) if changes else cfg
