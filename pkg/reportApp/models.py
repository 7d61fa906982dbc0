from django.db import models


class RunReport(models.Model):
    command = models.CharField(
        max_length=50,
        verbose_name="Command",
    )
    argv = models.JSONField(
        default=list,
        verbose_name="Arguments",
    )
    inputs = models.JSONField(default=dict)
    outputs = models.JSONField(default=dict)
    verdicts = models.JSONField(default=dict)
    exit_status = models.PositiveSmallIntegerField(default=0)
    digest = models.CharField(
        max_length=64,
        db_index=True,
        verbose_name="Report digest",
    )
    created_at = models.DateTimeField(
        auto_now_add=True,
        verbose_name="Created at",
    )

    class Meta:
        verbose_name_plural = 'Run reports'
        ordering = ['-created_at', '-id']

    def __str__(self):
        return f"{self.command} {self.digest}"

    @property
    def passed(self) -> bool:
        return self.exit_status == 0
