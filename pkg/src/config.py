"""
Configuration management for the triortho toolkit
"""
import logging
import os
from logging.handlers import RotatingFileHandler

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


def _env_flag(name, default):
    value = os.environ.get(name)
    if value is None:
        return default
    return value.strip().lower() in ('1', 'true', 'yes', 'on')


class Config:
    """Base configuration class"""

    # Logging Configuration
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'INFO')
    LOG_TO_STDOUT = _env_flag('LOG_TO_STDOUT', True)
    LOG_FILE = os.environ.get('LOG_FILE', 'logs/triortho.log')

    # Parallel enumeration workers
    WORKERS = int(os.environ.get('TRIORTHO_WORKERS') or os.cpu_count() or 1)

    # Exhaustive search limits
    COSET_ENUMERATION_LIMIT = int(os.environ.get('TRIORTHO_COSET_LIMIT', 2 ** 24))
    EXTENSION_SEARCH_BUDGET = int(os.environ.get('TRIORTHO_SEARCH_BUDGET', 2_000_000))
    PATTERN_LIMIT = int(os.environ.get('TRIORTHO_PATTERN_LIMIT', 5_000_000))

    # Reproducibility
    DEFAULT_SEED = int(os.environ.get('TRIORTHO_SEED', 2025))

    # CLI report format
    SCHEMA_VERSION = 1

class DevelopmentConfig(Config):
    """Development configuration"""
    DEBUG = True
    TESTING = False

class ProductionConfig(Config):
    """Production configuration"""
    DEBUG = False
    TESTING = False
    LOG_LEVEL = os.environ.get('LOG_LEVEL', 'WARNING')

class TestingConfig(Config):
    """Testing configuration"""
    DEBUG = True
    TESTING = True
    WORKERS = int(os.environ.get('TRIORTHO_WORKERS', 1))
    LOG_LEVEL = 'WARNING'

# Configuration mapping
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': DevelopmentConfig
}

def get_config():
    """Get configuration based on environment"""
    env = os.environ.get('TRIORTHO_ENV', 'development')
    return config.get(env, config['default'])


def configure_logging(cfg=None):
    """Attach a handler to the package logger; stdout stays reserved for JSON reports."""
    cfg = cfg or get_config()
    logger = logging.getLogger('src')
    if logger.handlers:
        return logger

    formatter = logging.Formatter(
        '%(asctime)s %(levelname)s: %(message)s [in %(pathname)s:%(lineno)d]')
    if cfg.LOG_TO_STDOUT:
        # StreamHandler defaults to stderr
        handler = logging.StreamHandler()
    else:
        log_dir = os.path.dirname(cfg.LOG_FILE)
        if log_dir and not os.path.exists(log_dir):
            os.makedirs(log_dir, exist_ok=True)
        handler = RotatingFileHandler(cfg.LOG_FILE, maxBytes=10240000, backupCount=10)
    handler.setFormatter(formatter)
    handler.setLevel(cfg.LOG_LEVEL)
    logger.addHandler(handler)
    logger.setLevel(cfg.LOG_LEVEL)
    logger.info('triortho startup (%s)', cfg.__name__)
    return logger
