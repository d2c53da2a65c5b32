from django.apps import AppConfig


class NihoConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'niho'
