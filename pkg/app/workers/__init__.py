"""Process-pool workers for per-block relation computations."""
