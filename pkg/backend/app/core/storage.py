from pathlib import Path
from typing import Union


class StorageError(Exception):
    """Directorio de salida no disponible o no escribible."""

    def __init__(self, message: str, path: Union[str, Path, None] = None):
        self.path = str(path) if path is not None else None
        super().__init__(f"{message}{f': {path}' if path is not None else ''}")


class StorageManager:

    @staticmethod
    def prepare_output_dir(output_dir: Union[str, Path]) -> Path:
        """Crea el directorio de salida y comprueba que se puede escribir en él."""
        output_dir = Path(output_dir)
        try:
            output_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise StorageError(f"Cannot create output directory ({e.strerror})", output_dir)

        if not output_dir.is_dir():
            raise StorageError("Output path is not a directory", output_dir)

        probe = output_dir / ".write_probe"
        try:
            with open(probe, "w", encoding="utf-8") as f:
                f.write("")
            probe.unlink()
        except OSError as e:
            raise StorageError(f"Output directory is not writable ({e.strerror})", output_dir)

        return output_dir
