import json
import os
import subprocess
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

ROOT = Path(os.environ.get("KAMREDUCE_ROOT", Path(__file__).resolve().parents[2]))
BIN = os.environ.get("KAMREDUCE_BIN", str(ROOT / "build" / "tools" / "kamreduce"))
SCHEMAS = ROOT / "schemas" / "v1"
CONFIGS = ROOT / "configs"


def _registry():
    resources = []
    for path in SCHEMAS.glob("*.json"):
        contents = json.loads(path.read_text())
        resources.append((contents["$id"], Resource.from_contents(contents)))
    return Registry().with_resources(resources)


REGISTRY = _registry()


def validate(doc, schema_name):
    schema = json.loads((SCHEMAS / f"{schema_name}.json").read_text())
    Draft202012Validator(schema, registry=REGISTRY).validate(doc)


def run_cli(*args, env=None):
    full_env = dict(os.environ)
    full_env.update(env or {})
    return subprocess.run([BIN, *map(str, args)], capture_output=True, text=True, env=full_env,
                          timeout=300)


@pytest.fixture
def config_file(tmp_path):
    """Write a modified copy of a shipped config and return its path."""

    def make(base, edit=None):
        cfg = json.loads((CONFIGS / base).read_text())
        if edit:
            edit(cfg)
        path = tmp_path / f"cfg_{len(list(tmp_path.glob('cfg_*')))}.json"
        path.write_text(json.dumps(cfg))
        return path

    return make
