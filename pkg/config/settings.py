"""
Настройки fmankit.

Источники по убыванию приоритета:
1. Явный аргумент (флаг CLI --truncation)
2. Переменная окружения FMANKIT_TRUNCATION
3. YAML-файл (по умолчанию config/settings.yaml)
4. Встроенные значения по умолчанию
"""

import logging
import os
from pathlib import Path
from typing import List, Optional, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from models.exceptions import InvalidParameters

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).with_name('settings.yaml')
TRUNCATION_ENV = 'FMANKIT_TRUNCATION'
DEFAULT_TRUNCATION = 8


class SweepSettings(BaseModel):
    """Сетка параметров для проверки каталога"""

    model_config = ConfigDict(extra='forbid')

    p_values: List[int] = Field(default_factory=lambda: [2, 3, 4], description="Значения p")
    q_values: List[int] = Field(default_factory=lambda: [2, 3, 4], description="Значения q")
    m_values: List[int] = Field(default_factory=lambda: [3, 4, 5], description="Значения m для I2(m)")
    random_gamma_count: int = Field(2, ge=0, description="Число случайных векторов gamma")
    gamma_bound: int = Field(3, ge=1, description="Граница числителей и знаменателей gamma")
    seed: int = Field(20240601, description="Seed генератора")
    output: str = Field('output/catalog_sweep.xlsx', description="Путь к Excel-отчету")


class RandomTableSettings(BaseModel):
    """Случайные таблицы для сравнения двух F-критериев"""

    model_config = ConfigDict(extra='forbid')

    count: int = Field(200, ge=1, description="Число таблиц")
    degree: int = Field(3, ge=0, description="Степень полиномиальных коэффициентов")
    seed: int = Field(7, description="Seed генератора")


class Settings(BaseModel):
    """Настройки библиотеки и CLI"""

    model_config = ConfigDict(extra='forbid')

    truncation: int = Field(DEFAULT_TRUNCATION, description="Усечение D")
    log_level: str = Field('INFO', description="Уровень логирования")
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    random_tables: RandomTableSettings = Field(default_factory=RandomTableSettings)

    @field_validator('truncation')
    @classmethod
    def truncation_is_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f'truncation must be >= 1, got {v}')
        return v

    @field_validator('log_level')
    @classmethod
    def log_level_is_known(cls, v: str) -> str:
        level = v.upper()
        if level not in ('DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'):
            raise ValueError(f'unknown log level {v!r}')
        return level


def _parse_truncation(value: Union[str, int], source: str) -> int:
    try:
        truncation = int(value)
    except (TypeError, ValueError):
        raise InvalidParameters(f"{source}: truncation must be an integer, got {value!r}")
    if truncation < 1:
        raise InvalidParameters(f"{source}: truncation must be >= 1, got {truncation}")
    return truncation


def load_settings(path: Optional[Union[str, Path]] = None,
                  truncation: Optional[int] = None) -> Settings:
    """
    Загрузка настроек.

    Args:
        path: YAML-файл; None - config/settings.yaml (если существует)
        truncation: Явное усечение, перекрывает все остальные источники

    Returns:
        Settings

    Raises:
        FileNotFoundError: Явно указанный файл не найден
        InvalidParameters: Некорректные значения
    """
    data = {}
    if path is not None and not Path(path).exists():
        raise FileNotFoundError(f"Settings file not found: {path}")
    settings_path = Path(path) if path is not None else DEFAULT_SETTINGS_PATH
    if settings_path.exists():
        logger.debug(f"Loading settings from {settings_path}")
        with open(settings_path, 'r', encoding='utf-8') as f:
            data = yaml.safe_load(f) or {}

    env_value = os.environ.get(TRUNCATION_ENV)
    if env_value:
        data['truncation'] = _parse_truncation(env_value, TRUNCATION_ENV)
    if truncation is not None:
        data['truncation'] = _parse_truncation(truncation, '--truncation')

    try:
        return Settings(**data)
    except ValidationError as e:
        raise InvalidParameters('; '.join(err['msg'] for err in e.errors())) from e
