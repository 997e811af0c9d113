# prover/apps.py
from django.apps import AppConfig

class ProverConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "prover"
    verbose_name = "HOL Tableau Prover"
