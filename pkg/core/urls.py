from django.contrib import admin
from django.urls import path
from ninja import NinjaAPI

from brstApp.api import brst_router
from heatkernelApp.api import heatkernel_router
from innerspaceApp.api import innerspace_router
from looptabApp.api import looptab_router
from powercountApp.api import powercount_router
from renormApp.api import renorm_router
from reportApp.api import report_router
from rulesApp.api import rules_router
from symcoreApp.api import symcore_router

api = NinjaAPI(
    title="QID symbolic engine API",
    version="1.0.0",
)

api.add_router('/symcore/', symcore_router)
api.add_router('/rules/', rules_router)
api.add_router('/powercount/', powercount_router)
api.add_router('/looptab/', looptab_router)
api.add_router('/innerspace/', innerspace_router)
api.add_router('/heatkernel/', heatkernel_router)
api.add_router('/renorm/', renorm_router)
api.add_router('/brst/', brst_router)
api.add_router('/report/', report_router)

urlpatterns = [
    path('admin/', admin.site.urls),
    path('api/', api.urls),
]
