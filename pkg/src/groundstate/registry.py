"""Factory registries for interchangeable, settings-carrying algorithms.

Every workflow stage is an *algorithm kind* (a named input/output
contract); implementations register under (kind, name) and are created by
name or as the kind's default.  Settings are typed key/value maps that
lock after the instance first runs.  Registering a brand-new kind name is
how the workflow model itself is extended; plugin registrations go
through exactly the same code path as built-ins.
"""

from __future__ import annotations

import threading
import warnings
from dataclasses import dataclass
from typing import Any, Callable, Iterable, Sequence

from .data import _envelope, register_kind
from .errors import (
    DuplicateRegistrationError,
    SchemaError,
    SettingsError,
    SettingsLockedError,
    UnknownImplementationError,
    UnknownKindError,
)

_SETTING_TYPES = ("bool", "int", "float", "str")


@dataclass(frozen=True)
class SettingSpec:
    """Declared settings key: name, scalar type and default value."""

    name: str
    type: str
    default: Any
    description: str = ""

    def __post_init__(self):
        if self.type not in _SETTING_TYPES:
            raise SettingsError(f"unsupported settings type '{self.type}'")


class Settings:
    """Typed key/value map; unknown keys rejected, writes fail once locked."""

    def __init__(self, schema: Sequence[SettingSpec], values: dict | None = None):
        self._schema = {spec.name: spec for spec in schema}
        self._values = {spec.name: spec.default for spec in schema}
        self._locked = False
        for key, value in (values or {}).items():
            self.set(key, value)

    @property
    def locked(self) -> bool:
        return self._locked

    def lock(self) -> None:
        self._locked = True

    def keys(self):
        return self._values.keys()

    def get(self, key: str, default=None):
        return self._values.get(key, default)

    def __getitem__(self, key: str):
        if key not in self._values:
            raise SettingsError(f"unknown settings key '{key}'")
        return self._values[key]

    def __setitem__(self, key: str, value) -> None:
        self.set(key, value)

    def set(self, key: str, value) -> None:
        if self._locked:
            raise SettingsLockedError(
                f"settings are locked after execution; cannot write '{key}'"
            )
        spec = self._schema.get(key)
        if spec is None:
            known = ", ".join(sorted(self._schema)) or "none"
            raise SettingsError(f"unknown settings key '{key}' (known keys: {known})")
        self._values[key] = self._coerce(spec, value)

    @staticmethod
    def _coerce(spec: SettingSpec, value):
        if spec.type == "bool":
            if isinstance(value, bool):
                return value
        elif spec.type == "int":
            if isinstance(value, int) and not isinstance(value, bool):
                return int(value)
        elif spec.type == "float":
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                return float(value)
        elif spec.type == "str":
            if isinstance(value, str):
                return value
        raise SettingsError(
            f"settings key '{spec.name}' expects type {spec.type}, "
            f"got {type(value).__name__}"
        )

    def snapshot(self) -> dict:
        return dict(self._values)

    def to_payload(self) -> dict:
        return _envelope("settings", values=self.snapshot(), locked=self._locked)

    @classmethod
    def from_payload(cls, payload: dict) -> "Settings":
        try:
            values = payload["values"]
            type_names = {bool: "bool", int: "int", float: "float", str: "str"}
            schema = []
            for key, value in values.items():
                kind = type_names.get(type(value))
                if kind is None:
                    raise SchemaError(f"settings value for '{key}' is not a scalar")
                schema.append(SettingSpec(key, kind, value))
            settings = cls(schema, values)
            if payload["locked"]:
                settings.lock()
            return settings
        except KeyError as exc:
            raise SchemaError(f"settings document missing field {exc}") from exc


register_kind("settings", Settings.from_payload)


class Algorithm:
    """Base class for registered implementations.

    Subclasses override ``_execute``; ``run`` delegates and locks the
    settings afterwards.  Instances hold no other mutable state, so equal
    inputs plus equal settings (and seeds) reproduce outputs.
    """

    def __init__(self, kind: str, name: str, settings: Settings):
        self.kind = kind
        self.name = name
        self.settings = settings

    def run(self, *args, **kwargs):
        try:
            return self._execute(*args, **kwargs)
        finally:
            self.settings.lock()

    def _execute(self, *args, **kwargs):  # pragma: no cover - abstract
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.kind}/{self.name}>"


@dataclass(frozen=True)
class Registration:
    kind: str
    name: str
    factory: Callable[[str, str, Settings], Algorithm]
    settings_schema: tuple[SettingSpec, ...]
    is_default: bool


@dataclass(frozen=True)
class ImplementationInfo:
    name: str
    is_default: bool
    settings_schema: tuple[SettingSpec, ...]


@dataclass(frozen=True)
class KindListing:
    kind: str
    found: bool
    implementations: tuple[ImplementationInfo, ...] = ()


class Registry:
    """Thread-safe (kind, name) -> implementation table."""

    def __init__(self):
        self._table: dict[str, dict[str, Registration]] = {}
        self._mutex = threading.Lock()

    def register(
        self,
        kind: str,
        name: str,
        factory: Callable[[str, str, Settings], Algorithm],
        settings: Iterable[SettingSpec] = (),
        default: bool = False,
    ) -> None:
        with self._mutex:
            bucket = self._table.setdefault(kind, {})
            if name in bucket:
                raise DuplicateRegistrationError(
                    f"'{name}' is already registered under kind '{kind}'"
                )
            if default:
                previous = [r.name for r in bucket.values() if r.is_default]
                if previous:
                    warnings.warn(
                        f"kind '{kind}': default moves from '{previous[0]}' "
                        f"to '{name}'",
                        stacklevel=2,
                    )
                    for other in previous:
                        old = bucket[other]
                        bucket[other] = Registration(
                            old.kind, old.name, old.factory, old.settings_schema, False
                        )
            bucket[name] = Registration(kind, name, factory, tuple(settings), default)

    def unregister(self, kind: str, name: str) -> None:
        with self._mutex:
            bucket = self._table.get(kind, {})
            bucket.pop(name, None)
            if not bucket:
                self._table.pop(kind, None)

    def kinds(self) -> list[str]:
        return sorted(self._table)

    def list(self, kind: str) -> KindListing:
        bucket = self._table.get(kind)
        if bucket is None:
            return KindListing(kind, False)
        infos = tuple(
            ImplementationInfo(reg.name, reg.is_default, reg.settings_schema)
            for _, reg in sorted(bucket.items())
        )
        return KindListing(kind, True, infos)

    def create(self, kind: str, name: str | None = None, **settings) -> Algorithm:
        bucket = self._table.get(kind)
        if bucket is None:
            known = ", ".join(self.kinds()) or "none"
            raise UnknownKindError(
                f"unknown algorithm kind '{kind}' (registered kinds: {known})"
            )
        if name is None:
            defaults = [r for r in bucket.values() if r.is_default]
            if not defaults:
                raise UnknownImplementationError(
                    f"kind '{kind}' has no default implementation; "
                    f"choose one of: {', '.join(sorted(bucket))}"
                )
            registration = defaults[0]
        else:
            registration = bucket.get(name)
            if registration is None:
                raise UnknownImplementationError(
                    f"unknown implementation '{name}' for kind '{kind}'; "
                    f"available: {', '.join(sorted(bucket))}"
                )
        instance_settings = Settings(registration.settings_schema, settings)
        return registration.factory(kind, registration.name, instance_settings)


_default_registry = Registry()


def default_registry() -> Registry:
    return _default_registry


def register(kind, name, factory, settings=(), default=False) -> None:
    _default_registry.register(kind, name, factory, settings, default)


def create(kind: str, name: str | None = None, **settings) -> Algorithm:
    return _default_registry.create(kind, name, **settings)


def list_implementations(kind: str) -> KindListing:
    return _default_registry.list(kind)


def kinds() -> list[str]:
    return _default_registry.kinds()
