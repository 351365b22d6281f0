"""Bundled example inputs."""

from importlib import resources

FIGURE_EIGHT = "figure_eight.hyptri"
FIGURE_EIGHT_3TET = "figure_eight_3tet.hyptri"
WHITEHEAD = "whitehead.hyptri"
AKBULUT_CORK = "akbulut_cork.json"


def data_path(name):
    return resources.files("corkforge") / "data" / name


def read_data(name):
    return data_path(name).read_text()
