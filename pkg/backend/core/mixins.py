from django.core.exceptions import ValidationError


class FullCleanSaveMixin:
    """
    Call full_clean() before saving, and refuse edits to `locked_fields` once `is_locked` is True.

    Models using the mixin store the initial values of the locked fields on load, the way a
    finished record snapshots what it was produced from.
    """

    locked_fields = ()

    class Meta:
        abstract = True

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self._initial_locked = {name: getattr(self, name) for name in self.locked_fields}

    @property
    def is_locked(self) -> bool:
        return False

    def save(self, *args, **kwargs):
        if not self._state.adding and self.is_locked:
            changed = [
                name
                for name in self.locked_fields
                if getattr(self, name) != self._initial_locked[name]
            ]
            if changed:
                raise ValidationError(f"Cannot modify {', '.join(changed)} of a finished record.")
        self.full_clean()
        return super().save(*args, **kwargs)
