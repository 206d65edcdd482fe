from django.db import models, transaction

from adf.utils.experiment import ResultRecord


class SimulationRun(models.Model):
    """One stored harness run; the CSV file remains the primary output."""
    COMMAND_CHOICES = [
        ('sweep', 'Sweep'),
        ('montecarlo', 'Monte-Carlo'),
        ('optimize', 'Optimize'),
    ]

    command = models.CharField(max_length=20, choices=COMMAND_CHOICES)
    config = models.JSONField(default=dict)
    # unsigned 64-bit seeds do not fit a signed integer column
    seed = models.CharField(max_length=20)
    output_path = models.CharField(max_length=500, blank=True)
    record_count = models.PositiveIntegerField(default=0)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ['-created_at']

    def __str__(self):
        return f"{self.command} seed={self.seed} ({self.record_count} records)"

    @classmethod
    def store(cls, command, config, seed, records, output_path=''):
        records = list(records)
        with transaction.atomic():
            run = cls.objects.create(
                command=command, config=config, seed=str(seed),
                output_path=str(output_path), record_count=len(records),
            )
            RateRecord.objects.bulk_create([RateRecord.from_result(run, r) for r in records])
        return run

    def results(self):
        return [record.to_result() for record in self.records.order_by('scheme', 'M', 'z0', 'alpha', 'trial')]


class RateRecord(models.Model):
    """One (scheme, M, z0, alpha, trial) rate of a stored run."""
    run = models.ForeignKey(SimulationRun, on_delete=models.CASCADE, related_name='records')
    scheme = models.CharField(max_length=50)
    M = models.PositiveIntegerField()
    z0 = models.FloatField()
    alpha = models.FloatField(null=True, blank=True)
    trial = models.PositiveIntegerField()
    rate_bits = models.FloatField()
    wall_time_ms = models.FloatField(default=0.0)
    seed = models.CharField(max_length=20)

    class Meta:
        ordering = ['run', 'scheme', 'M', 'z0', 'alpha', 'trial']
        constraints = [
            models.UniqueConstraint(fields=['run', 'scheme', 'M', 'z0', 'alpha', 'trial'],
                                    name='unique_rate_record_key'),
        ]

    def __str__(self):
        return f"{self.scheme} M={self.M} z0={self.z0} trial={self.trial}: {self.rate_bits:.4f} bits"

    @classmethod
    def from_result(cls, run, record):
        return cls(
            run=run, scheme=record.scheme, M=record.M, z0=record.z0, alpha=record.alpha,
            trial=record.trial, rate_bits=record.rate_bits, wall_time_ms=record.wall_time_ms,
            seed=str(record.seed),
        )

    def to_result(self):
        return ResultRecord(
            scheme=self.scheme, M=self.M, z0=self.z0, alpha=self.alpha, trial=self.trial,
            rate_bits=self.rate_bits, wall_time_ms=self.wall_time_ms, seed=int(self.seed),
        )
