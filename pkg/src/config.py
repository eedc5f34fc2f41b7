import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Paths
PROJECT_ROOT = Path(__file__).parent.parent
OUTPUT_DIR = os.getenv("UCRD_OUTPUT_DIR", str(PROJECT_ROOT / "outputs"))
LOG_LEVEL = os.getenv("UCRD_LOG_LEVEL", "INFO")

# Master seed
SEED = int(os.getenv("UCRD_SEED", "0"))

# Layer training (eta, epsilon, IT)
ETA = float(os.getenv("UCRD_ETA", "0.5"))
LEARNING_RATE = float(os.getenv("UCRD_LEARNING_RATE", "0.05"))
EPOCHS = int(os.getenv("UCRD_EPOCHS", "100"))
BATCH_SIZE = int(os.getenv("UCRD_BATCH_SIZE", "32"))
WEIGHT_INIT_STD = 0.01
GRADIENT_MODES = ("paper_printed", "exact_blockcost")
GRADIENT_MODE = "paper_printed"
COLLABORATIVE_SIGNS = ("descent", "paper_literal")
COLLABORATIVE_SIGN = "descent"

# Network
N_LAYERS = 3
REUSE_PARTITION = False

# LSH blocks (K, L default to ceil(sqrt(N)), ceil(sqrt(M)) when unset)
N_HASHES = int(os.getenv("UCRD_N_HASHES", "64"))

# Clustering
KMEANS_N_INIT = 10
KMEANS_MAX_ITER = 300
ALGORITHMS = ("kmeans", "spectral")
REPEATS = int(os.getenv("UCRD_REPEATS", "10"))

# Benchmark
FEATURE_SETS = ("ucrdnet",)
BENCHMARK_METRIC = "accuracy"
MAX_WORKERS = int(os.getenv("UCRD_MAX_WORKERS", "4"))

# Model file
MODEL_MAGIC = b"UCRD"
MODEL_VERSION = 1
