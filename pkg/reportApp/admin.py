from django.contrib import admin
from unfold.admin import ModelAdmin

from .models import RunReport


@admin.register(RunReport)
class RunReportAdmin(ModelAdmin):
    list_display = ["id", "command", "digest", "exit_status", "created_at"]
    list_filter = ["command", "exit_status", "created_at"]
    search_fields = ["command", "digest"]
    readonly_fields = ["command", "argv", "inputs", "outputs", "verdicts", "exit_status", "digest", "created_at"]
    fieldsets = (
        (None, {
            "fields": ("command", "argv", "exit_status", "digest", "created_at")
        }),
        ("Report", {
            "fields": ("inputs", "outputs", "verdicts")
        }),
    )

    def has_add_permission(self, request):
        return False
