import tempfile
import typing

import pytest


@pytest.fixture
def workspace() -> typing.Iterator[str]:
    with tempfile.TemporaryDirectory() as temp_dir:
        yield temp_dir
