import re
from pathlib import Path

import pytest

from osmcheck.cfg import build_cfg
from osmcheck.kripke import from_cfg
from osmcheck.pipeline import load_program
from osmcheck.properties import parse_property_file
from osmcheck.weaving import weave

CORPUS = Path(__file__).resolve().parent.parent / "corpus" / "ehr"

EHR_ALIASES = {
    "AccessControl": "A",
    "DataPrivacy": "B",
    "HealthServiceSupport": "C",
    "Encryption": "E",
    "Logging": "L",
}


def make_edited_corpus(dst: Path, drop: str):
    """Copy the EHR corpus without `drop`, pruning the deleted aspect from
    the precedence directive (the human-in-the-loop edit a deletion implies)."""
    dst.mkdir(parents=True, exist_ok=True)
    aspect = {
        "access_control.osm": "AccessControl",
        "logging.osm": "Logging",
        "encryption.osm": "Encryption",
        "data_privacy.osm": "DataPrivacy",
        "health_service.osm": "HealthServiceSupport",
    }.get(drop)
    for f in sorted(CORPUS.iterdir()):
        if f.name == drop:
            continue
        text = f.read_text(encoding="utf-8")
        if f.name == "base.osm" and aspect:
            def prune(match):
                names = [n.strip() for n in match.group(1).split(",") if n.strip() != aspect]
                return f"precedence {', '.join(names)};" if names else ""

            text = re.sub(r"precedence ([^;]+);", prune, text)
        (dst / f.name).write_text(text, encoding="utf-8")
    return dst


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


@pytest.fixture(scope="session")
def corpus_program():
    return load_program([CORPUS])


@pytest.fixture(scope="session")
def corpus_woven(corpus_program):
    return weave(corpus_program)


@pytest.fixture(scope="session")
def request_cfg(corpus_woven):
    return build_cfg(corpus_woven, "HealthService.requestHistory")


@pytest.fixture(scope="session")
def request_model(request_cfg):
    return from_cfg(request_cfg)


@pytest.fixture(scope="session")
def ehr_props():
    return parse_property_file((CORPUS / "ehr.props").read_text(encoding="utf-8"))
