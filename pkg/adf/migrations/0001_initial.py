# Generated by Django 5.2.4 on 2026-10-18 09:00

import django.db.models.deletion
from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = [
    ]

    operations = [
        migrations.CreateModel(
            name='SimulationRun',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('command', models.CharField(choices=[('sweep', 'Sweep'), ('montecarlo', 'Monte-Carlo'), ('optimize', 'Optimize')], max_length=20)),
                ('config', models.JSONField(default=dict)),
                ('seed', models.CharField(max_length=20)),
                ('output_path', models.CharField(blank=True, max_length=500)),
                ('record_count', models.PositiveIntegerField(default=0)),
                ('created_at', models.DateTimeField(auto_now_add=True)),
            ],
            options={
                'ordering': ['-created_at'],
            },
        ),
        migrations.CreateModel(
            name='RateRecord',
            fields=[
                ('id', models.BigAutoField(auto_created=True, primary_key=True, serialize=False, verbose_name='ID')),
                ('scheme', models.CharField(max_length=50)),
                ('M', models.PositiveIntegerField()),
                ('z0', models.FloatField()),
                ('alpha', models.FloatField(blank=True, null=True)),
                ('trial', models.PositiveIntegerField()),
                ('rate_bits', models.FloatField()),
                ('wall_time_ms', models.FloatField(default=0.0)),
                ('seed', models.CharField(max_length=20)),
                ('run', models.ForeignKey(on_delete=django.db.models.deletion.CASCADE, related_name='records', to='adf.simulationrun')),
            ],
            options={
                'ordering': ['run', 'scheme', 'M', 'z0', 'alpha', 'trial'],
                'constraints': [models.UniqueConstraint(fields=('run', 'scheme', 'M', 'z0', 'alpha', 'trial'), name='unique_rate_record_key')],
            },
        ),
    ]
