import os

# experiment runners read the worker count from the environment;
# pin it so CSV byte-determinism checks are meaningful
os.environ.setdefault("PHASELIFT_THREADS", "1")
