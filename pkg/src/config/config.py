import os
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables
env_path = Path(__file__).parent.parent.parent / '.env'
load_dotenv(env_path)


class Config:
    """Simulator defaults with validation."""

    # Monte Carlo
    SEED = int(os.getenv('DMIM_SEED', '20240601'))
    WORKERS = int(os.getenv('DMIM_WORKERS', '1'))
    MAX_GROUPS = int(os.getenv('DMIM_MAX_GROUPS', '100000'))
    TARGET_ERRORS = int(os.getenv('DMIM_TARGET_ERRORS', '500'))
    BLOCK_GROUPS = int(os.getenv('DMIM_BLOCK_GROUPS', '2000'))

    # Verification suite trial counts per Eb/N0 point
    VERIFY_TRIALS = int(os.getenv('DMIM_VERIFY_TRIALS', '10000'))
    VERIFY_TRIALS_16QAM = int(os.getenv('DMIM_VERIFY_TRIALS_16QAM', '2500'))

    # Output
    RESULTS_DIR = os.getenv('DMIM_RESULTS_DIR', 'results')
    LOG_DIR = os.getenv('DMIM_LOG_DIR', 'logs')

    # Logging
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')

    @classmethod
    def validate(cls) -> None:
        """Validate that every numeric setting is in range."""
        positive_vars = [
            'WORKERS',
            'MAX_GROUPS',
            'TARGET_ERRORS',
            'BLOCK_GROUPS',
            'VERIFY_TRIALS',
            'VERIFY_TRIALS_16QAM',
        ]

        invalid = []
        for var in positive_vars:
            if getattr(cls, var) < 1:
                invalid.append(var)
        if cls.SEED < 0:
            invalid.append('SEED')
        if cls.LOG_LEVEL.upper() not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            invalid.append('LOG_LEVEL')

        if invalid:
            raise ValueError(f"Invalid configuration: {invalid}")

    @classmethod
    def to_dict(cls) -> dict:
        """Return configuration as dictionary."""
        return {
            'seed': cls.SEED,
            'workers': cls.WORKERS,
            'max_groups': cls.MAX_GROUPS,
            'target_errors': cls.TARGET_ERRORS,
            'block_groups': cls.BLOCK_GROUPS,
            'verify_trials': cls.VERIFY_TRIALS,
            'verify_trials_16qam': cls.VERIFY_TRIALS_16QAM,
            'results_dir': cls.RESULTS_DIR,
            'log_dir': cls.LOG_DIR,
            'log_level': cls.LOG_LEVEL
        }
