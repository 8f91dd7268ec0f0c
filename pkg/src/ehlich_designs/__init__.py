"""Saturated two-level designs with Ehlich-form information matrices.

The package covers three layers: exact evaluation of the block matrices
K(n, p, s) and their D/A efficiency grids (core), complete catalogs of
non-isomorphic designs attaining those matrices via column extension with
canonical-form rejection (columns, canon, engine), and ranking plus
persistence of the catalogs (aberration, catalog, cli).
"""

from .aberration import AliasStats, alias_stats, rank_catalog, round2
from .canon import (
    KEY_FORMAT_VERSION,
    DedupStore,
    apply_isomorphism,
    canonical_form,
    canonical_key,
    decode_key,
    scramble,
)
from .catalog import (
    CatalogEntry,
    build_entries,
    emit_grids,
    read_catalog,
    verify_tree,
    write_catalog,
)
from .columns import (
    CandidateSets,
    columns_with_sum,
    count_formulas,
    enumerate_candidates,
    initial_design,
)
from .core import (
    EfficiencyGrid,
    EhlichSpec,
    build_matrix,
    det_closed_form,
    efficiency_grid,
    make_spec,
    trace_inv_closed_form,
)
from .designs import Design, Signature, column_sum, inner_product, pack_column, unpack_column
from .engine import (
    EhlichFormError,
    Step,
    check_ehlich_form,
    enumerate_class,
    extend_one,
    recover_groups,
    schedule,
    worker_count,
)

__version__ = "0.1.0"
