"""
OpenTelemetry bootstrap for check runs.

The parent process exports through batching processors.  Suite workers are
pool processes that may exit without running atexit hooks, so they export
each span synchronously and record no metrics of their own (counters are
updated in the parent from the returned outcomes).
"""

import logging

from opentelemetry import metrics, trace
from opentelemetry.exporter.otlp.proto.grpc.metric_exporter import OTLPMetricExporter
from opentelemetry.exporter.otlp.proto.grpc.trace_exporter import OTLPSpanExporter
from opentelemetry.sdk.metrics import MeterProvider
from opentelemetry.sdk.metrics.export import ConsoleMetricExporter, PeriodicExportingMetricReader
from opentelemetry.sdk.resources import Resource
from opentelemetry.sdk.trace import SpanProcessor, TracerProvider
from opentelemetry.sdk.trace.export import (
    BatchSpanProcessor,
    ConsoleSpanExporter,
    SimpleSpanProcessor,
    SpanExporter,
)

from qcheck.core.config import Config

logger = logging.getLogger(__name__)

SERVICE_NAME = "qcheck"


def telemetry_enabled() -> bool:
    return bool(Config.OTEL_ENDPOINT) or Config.OTEL_DEBUG


def span_processor(exporter: SpanExporter, worker: bool = False) -> SpanProcessor:
    """Batching in the parent, synchronous export in pool workers."""
    if worker:
        return SimpleSpanProcessor(exporter)
    return BatchSpanProcessor(exporter)


def _span_exporter() -> SpanExporter:
    if Config.OTEL_ENDPOINT:
        return OTLPSpanExporter(endpoint=Config.OTEL_ENDPOINT)
    return ConsoleSpanExporter()


def init_telemetry(worker: bool = False) -> TracerProvider | None:
    """
    Install the tracer (and, in the parent, meter) providers.

    Returns the tracer provider, or None when telemetry is disabled.  A
    forked worker inherits the parent's provider; it is kept and flushed
    per check by ``flush_telemetry``.
    """
    if not telemetry_enabled():
        logger.info("OpenTelemetry is disabled (set OTEL_EXPORTER_OTLP_ENDPOINT to enable).")
        return None

    current = trace.get_tracer_provider()
    if isinstance(current, TracerProvider):
        return current

    logger.info(f"Initializing OpenTelemetry for {SERVICE_NAME} (worker={worker})")
    resource = Resource.create({"service.name": SERVICE_NAME})

    tracer_provider = TracerProvider(resource=resource)
    tracer_provider.add_span_processor(span_processor(_span_exporter(), worker))
    trace.set_tracer_provider(tracer_provider)

    if not worker:
        if Config.OTEL_ENDPOINT:
            metric_exporter = OTLPMetricExporter(endpoint=Config.OTEL_ENDPOINT)
        else:
            metric_exporter = ConsoleMetricExporter()
        reader = PeriodicExportingMetricReader(metric_exporter)
        metrics.set_meter_provider(MeterProvider(resource=resource, metric_readers=[reader]))
    return tracer_provider


def init_worker_telemetry() -> None:
    """Pool initializer."""
    init_telemetry(worker=True)


def flush_telemetry() -> None:
    """Push buffered spans and metrics; a no-op while the API proxies are installed."""
    for provider in (trace.get_tracer_provider(), metrics.get_meter_provider()):
        force_flush = getattr(provider, "force_flush", None)
        if force_flush is not None:
            force_flush()


def get_meter():
    return metrics.get_meter("qcheck.metrics")


def get_tracer():
    return trace.get_tracer("qcheck.tracer")
