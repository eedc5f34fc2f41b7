from src.lsh.hashing import (
    MINHASH,
    SIGN_PROJECTION,
    Signature,
    binarize_for_hash,
    jaccard_similarity,
    minhash_signature,
    sign_projection_signature,
)
from src.lsh.partition import (
    BlockPartition,
    build_partition,
    default_group_count,
    export_partition,
    load_partition,
    partition_cols,
    partition_rows,
)

__all__ = [
    "MINHASH",
    "SIGN_PROJECTION",
    "Signature",
    "binarize_for_hash",
    "jaccard_similarity",
    "minhash_signature",
    "sign_projection_signature",
    "BlockPartition",
    "build_partition",
    "default_group_count",
    "export_partition",
    "load_partition",
    "partition_cols",
    "partition_rows",
]
