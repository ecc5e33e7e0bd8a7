import json
import pathlib
import subprocess

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource


def pytest_addoption(parser):
    parser.addoption("--kies", required=True, help="path to the kies executable")
    parser.addoption("--schemas", required=True, help="directory holding the JSON schemas")


@pytest.fixture(scope="session")
def kies(request):
    exe = request.config.getoption("--kies")

    def run(*args, check=True):
        proc = subprocess.run([exe, *map(str, args)], capture_output=True, text=True, timeout=300)
        if check and proc.returncode != 0:
            raise AssertionError(f"kies {' '.join(map(str, args))} exited {proc.returncode}: {proc.stderr}")
        return proc

    return run


@pytest.fixture(scope="session")
def schema(request):
    root = pathlib.Path(request.config.getoption("--schemas"))
    docs = {p.name: json.loads(p.read_text()) for p in root.glob("*.schema.json")}
    registry = Registry().with_resources(
        (name, Resource.from_contents(doc)) for name, doc in docs.items()
    )

    def validate(name, instance):
        Draft202012Validator(docs[name], registry=registry).validate(instance)

    return validate
