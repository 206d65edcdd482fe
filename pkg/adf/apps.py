from django.apps import AppConfig


class AdfConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'adf'
    verbose_name = 'Antenna density functions'
