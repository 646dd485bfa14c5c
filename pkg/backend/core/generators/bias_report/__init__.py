from backend.core.generators.bias_report.report_writer import BiasReportWriter, kde_filename

__all__ = [
    'BiasReportWriter',
    'kde_filename',
]
