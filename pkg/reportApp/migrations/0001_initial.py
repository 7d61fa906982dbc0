# Generated by Django 5.2 on 2026-10-19 09:12

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='RunReport',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(max_length=50, verbose_name='Command')),
                ('argv', models.JSONField(default=list, verbose_name='Arguments')),
                ('inputs', models.JSONField(default=dict)),
                ('outputs', models.JSONField(default=dict)),
                ('verdicts', models.JSONField(default=dict)),
                ('exit_status', models.PositiveSmallIntegerField(default=0)),
                ('digest', models.CharField(db_index=True, max_length=64, verbose_name='Report digest')),
                ('created_at', models.DateTimeField(auto_now_add=True, verbose_name='Created at')),
            ],
            options={
                'verbose_name_plural': 'Run reports',
                'ordering': ['-created_at', '-id'],
            },
        ),
    ]
