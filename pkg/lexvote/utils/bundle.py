"""
On-disk formats for feature sets, trees and trained classifiers.

Feature set (JSON lines): a header object
    {"format": "lexvote-featureset", "version": 1, "view": ..., "config": {...}}
followed by one feature per line, in FeatureSet order:
    {"kind": ..., "words": [...], "target_side": ..., "score": ...}

Tree (JSON): {"format": "lexvote-tree", "version": 1, "width": W, "root": node}
with node = {"type": "leaf", "distribution": {...}, "prediction": s}
         or {"type": "split", "feature": i, "distribution": {...}, "true": node, "false": node}
Feature indices refer to the feature set stored next to the tree.

Model bundle: one directory per target word holding manifest.json plus the
feature set and tree files the manifest names.
"""
import json
import logging
from collections.abc import Mapping
from pathlib import Path

from lexvote.exceptions import ModelFormatError
from lexvote.models import (
    BaggedClassifier, BaggingParams, Classifier, DecisionTree, Ensemble, EnsembleSpec, Feature,
    FeatureExtractionConfig, FeatureSet, Leaf, MajorityClassifier, Node, Split, StumpClassifier, View,
)

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
FEATURESET_FORMAT = "lexvote-featureset"
TREE_FORMAT = "lexvote-tree"
MODEL_FORMAT = "lexvote-model"
MANIFEST = "manifest.json"


def _check_header(data: Mapping, expected: str, source) -> None:
    if data.get("format") != expected:
        raise ModelFormatError(f"{source}: not a {expected} file")
    if data.get("version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"{source}: unsupported {expected} version {data.get('version')!r} (expected {FORMAT_VERSION})"
        )


def _read_json(path: Path):
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ModelFormatError(f"{path}: invalid JSON ({exc})") from exc


def _write_json(data, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8", newline="\n")
    return path


# ---------------------------------------------------------------------------
# Feature sets
# ---------------------------------------------------------------------------

def save_feature_set(fs: FeatureSet, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {"format": FEATURESET_FORMAT, "version": FORMAT_VERSION, "view": fs.view.value, "config": fs.config.to_dict()}
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(json.dumps(header, sort_keys=True) + "\n")
        for feature, score in zip(fs.features, fs.scores):
            record = {
                "kind": feature.kind.value,
                "words": list(feature.words),
                "target_side": feature.target_side,
                "score": score,
            }
            handle.write(json.dumps(record, sort_keys=True) + "\n")
    return path


def load_feature_set(path: str | Path) -> FeatureSet:
    path = Path(path)
    try:
        lines = [line for line in path.read_text(encoding="utf-8").splitlines() if line.strip()]
    except UnicodeDecodeError as exc:
        raise ModelFormatError(f"{path}: not valid UTF-8 ({exc.reason})") from exc
    if not lines:
        raise ModelFormatError(f"{path}: empty feature set file")
    try:
        header = json.loads(lines[0])
        records = [json.loads(line) for line in lines[1:]]
        _check_header(header, FEATURESET_FORMAT, path)
        return FeatureSet(
            view=View(header["view"]),
            features=tuple(Feature(r["kind"], tuple(r["words"]), r.get("target_side")) for r in records),
            scores=tuple(r["score"] for r in records),
            config=FeatureExtractionConfig.from_dict(header["config"]),
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ModelFormatError(f"{path}: malformed feature set ({exc})") from exc


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------

def node_to_dict(node: Node) -> dict:
    if isinstance(node, Leaf):
        return {"type": "leaf", "distribution": dict(node.distribution), "prediction": node.prediction}
    return {
        "type": "split",
        "feature": node.feature_index,
        "distribution": dict(node.distribution),
        "true": node_to_dict(node.on_true),
        "false": node_to_dict(node.on_false),
    }


def node_from_dict(data: Mapping, width: int) -> Node:
    if data["type"] == "leaf":
        return Leaf(distribution=dict(data["distribution"]), prediction=data["prediction"])
    if data["type"] != "split":
        raise ModelFormatError(f"unknown tree node type {data['type']!r}")
    index = int(data["feature"])
    if not 0 <= index < width:
        raise ModelFormatError(f"split on feature {index} outside width {width}")
    return Split(
        feature_index=index,
        on_true=node_from_dict(data["true"], width),
        on_false=node_from_dict(data["false"], width),
        distribution=dict(data["distribution"]),
    )


def save_tree(tree: DecisionTree, path: str | Path) -> Path:
    data = {"format": TREE_FORMAT, "version": FORMAT_VERSION, "width": tree.width, "root": node_to_dict(tree.root)}
    return _write_json(data, Path(path))


def load_tree(path: str | Path, width: int | None = None) -> DecisionTree:
    """width, when given, must match the stored tree width."""
    path = Path(path)
    data = _read_json(path)
    _check_header(data, TREE_FORMAT, path)
    if width is not None and data["width"] != width:
        raise ModelFormatError(f"{path}: tree width {data['width']} does not match feature set width {width}")
    try:
        return DecisionTree(root=node_from_dict(data["root"], data["width"]), width=data["width"])
    except (KeyError, TypeError) as exc:
        raise ModelFormatError(f"{path}: malformed tree ({exc})") from exc


# ---------------------------------------------------------------------------
# Classifiers
# ---------------------------------------------------------------------------

def _save_member(member: BaggedClassifier, directory: Path) -> dict:
    tag = member.view.value
    fs_name = f"{tag}.features.jsonl"
    save_feature_set(member.feature_set, directory / fs_name)
    tree_names = []
    for i, tree in enumerate(member.trees):
        name = f"{tag}.tree-{i:03d}.json"
        save_tree(tree, directory / name)
        tree_names.append(name)
    return {"view": tag, "feature_set": fs_name, "trees": tree_names, "bagging": member.params.to_dict()}


def save_classifier(classifier: Classifier, directory: str | Path) -> Path:
    """Write a bundle directory; returns the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format": MODEL_FORMAT,
        "version": FORMAT_VERSION,
        "name": classifier.name,
        "target_word": classifier.target_word,
        "sense_priors": dict(sorted(classifier.sense_priors.items())),
    }
    if isinstance(classifier, Ensemble):
        manifest["kind"] = "ensemble"
        manifest["members"] = [_save_member(m, directory) for m in classifier.members]
    elif isinstance(classifier, StumpClassifier):
        manifest["kind"] = "stump"
        manifest["feature_set"] = save_feature_set(classifier.feature_set, directory / "stump.features.jsonl").name
        manifest["tree"] = save_tree(classifier.tree, directory / "stump.tree.json").name
    elif isinstance(classifier, MajorityClassifier):
        manifest["kind"] = "majority"
        manifest["sense"] = classifier.sense
    else:
        raise ModelFormatError(f"cannot serialize {type(classifier).__name__}")
    return _write_json(manifest, directory / MANIFEST)


def _load_member(entry: Mapping, directory: Path, target_word: str, priors: dict) -> BaggedClassifier:
    fs = load_feature_set(directory / entry["feature_set"])
    trees = tuple(load_tree(directory / name, fs.width) for name in entry["trees"])
    return BaggedClassifier(
        target_word=target_word,
        view=View(entry["view"]),
        feature_set=fs,
        trees=trees,
        params=BaggingParams(**entry["bagging"]),
        sense_priors=priors,
    )


def load_classifier(directory: str | Path) -> Classifier:
    directory = Path(directory)
    manifest = _read_json(directory / MANIFEST)
    _check_header(manifest, MODEL_FORMAT, directory / MANIFEST)
    try:
        word = manifest["target_word"]
        priors = {s: int(c) for s, c in manifest["sense_priors"].items()}
        kind = manifest["kind"]
        if kind == "ensemble":
            members = tuple(_load_member(m, directory, word, priors) for m in manifest["members"])
            spec = EnsembleSpec(tuple(m.view for m in members))
            return Ensemble(spec=spec, members=members, sense_priors=priors)
        if kind == "stump":
            fs = load_feature_set(directory / manifest["feature_set"])
            tree = load_tree(directory / manifest["tree"], fs.width)
            return StumpClassifier(target_word=word, feature_set=fs, tree=tree, sense_priors=priors)
        if kind == "majority":
            return MajorityClassifier(target_word=word, sense=manifest["sense"], sense_priors=priors)
    except KeyError as exc:
        raise ModelFormatError(f"{directory}: manifest is missing {exc}") from exc
    raise ModelFormatError(f"{directory}: unknown classifier kind {kind!r}")


def save_models(classifiers: Mapping[str, Classifier], root: str | Path) -> list[Path]:
    """One bundle per target word under root/<word>/."""
    root = Path(root)
    paths = [save_classifier(clf, root / word) for word, clf in sorted(classifiers.items())]
    logger.info("Saved %d model bundles under %s", len(paths), root)
    return paths


def load_models(root: str | Path) -> dict[str, Classifier]:
    """target_word -> classifier for every bundle directly under root."""
    root = Path(root)
    models = {}
    for manifest in sorted(root.glob(f"*/{MANIFEST}")):
        classifier = load_classifier(manifest.parent)
        models[classifier.target_word] = classifier
    logger.info("Loaded %d model bundles from %s", len(models), root)
    return models
