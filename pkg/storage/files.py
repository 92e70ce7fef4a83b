"""Чтение CSV/TSV и атомарная запись файлов"""
import csv
import io
import os
import tempfile
from pathlib import Path
from typing import Iterable, List, Sequence, Union

from utils.errors import StorageError

PathLike = Union[str, Path]


def read_csv_rows(path: PathLike, skip_comments: bool = False, delimiter: str = ",") -> List[List[str]]:
    """
    Прочитать CSV-файл построчно

    Поля обрезаются, пустые поля отбрасываются, пустые строки пропускаются.
    Кавычки разбираются модулем csv, поэтому поле в кавычках может содержать запятую.
    """
    rows: List[List[str]] = []
    with open(path, "r", encoding="utf-8", newline="") as f:
        for record in csv.reader(f, delimiter=delimiter):
            if skip_comments and record and record[0].lstrip().startswith("#"):
                continue
            fields = [field.strip() for field in record]
            fields = [field for field in fields if field]
            if fields:
                rows.append(fields)
    return rows


def read_csv_fields(path: PathLike, skip_comments: bool = False) -> List[str]:
    """Все непустые поля файла подряд (формат файлов тегов и redword.csv)"""
    return [field for row in read_csv_rows(path, skip_comments=skip_comments) for field in row]


def render_csv_rows(rows: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def atomic_write_bytes(path: PathLike, data: bytes) -> None:
    """Записать во временный файл рядом с целевым и атомарно переименовать"""
    target = Path(path)
    tmp_name = None
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp_name = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
        with os.fdopen(fd, "wb") as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(tmp_name, target)
    except OSError as e:
        if tmp_name and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise StorageError(f"cannot write {target}: {e}") from e


def atomic_write_text(path: PathLike, text: str) -> None:
    atomic_write_bytes(path, text.encode("utf-8"))


def atomic_write_csv(path: PathLike, rows: Iterable[Sequence[str]]) -> None:
    atomic_write_text(path, render_csv_rows(rows))
