import pytest

from roleqe.ncp import NcpBank
from roleqe.roles import RoleMappingTable
from roleqe.textlex import StopList, UnigramFrequencyTable

from e2e_fixture import build_e2e_inputs


@pytest.fixture(scope="session")
def stoplist():
    return StopList.default()


@pytest.fixture(scope="session")
def role_table():
    return RoleMappingTable.default()


@pytest.fixture(scope="session")
def empty_freqs():
    return UnigramFrequencyTable()


@pytest.fixture(scope="session")
def worked_bank():
    return NcpBank.build(
        phrases=["united states", "hostage takers", "new economic policy"],
        acronyms={"NEP": "new economic policy"},
    )


# parse of "coping with overcrowded prisons" in the bare-row convention
WORKED_PARSE = """\
amod(prisons-4, overcrowded-3)
prep_with(coping-1, prisons-4)
prep_with(with-2, -)
"""


@pytest.fixture(scope="session")
def worked_parse_text():
    return WORKED_PARSE


@pytest.fixture(scope="session")
def e2e_inputs(tmp_path_factory):
    """Deterministic 200-document corpus with planted expansion terms."""
    root = tmp_path_factory.mktemp("e2e")
    return build_e2e_inputs(root)
