import numpy as np
from django.utils.text import slugify


def default_output_path(m, mode, seed, fmt):
    """Generate the default output file name for a sweep."""
    ext = "csv" if fmt == "csv" else "jsonl"
    safe_name = slugify(f"sweep-m{m}-{mode}-seed{seed}")

    return f"{safe_name}.{ext}"


def counter_rng(seed, index):
    """
    Return a generator whose stream depends only on (seed, index).

    Philox is counter based: the index selects a disjoint block of counters, so any record of a
    sweep can be regenerated without replaying the ones before it.
    """
    return np.random.Generator(np.random.Philox(key=seed, counter=index << 64))


def index_chunks(count, size):
    """Split range(count) into consecutive (start, stop) pairs of at most `size` items."""
    return [(start, min(start + size, count)) for start in range(0, count, size)]
