# prover/urls.py
from django.urls import path

from prover.api_views import api_modes, api_ping, api_prove

app_name = "prover"

urlpatterns = [
    path("api/ping", api_ping, name="api_ping"),
    path("api/modes", api_modes, name="api_modes"),
    path("api/prove", api_prove, name="api_prove"),
]
