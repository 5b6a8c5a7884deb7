import logging
import queue
import threading
from typing import Any, Callable, Iterable, List, Optional, Tuple

from model import EnsembleMemberError

logger = logging.getLogger(__name__)


class EnsemblePool:
    """
    앙상블 멤버 / 반복 실행용 워커 풀

    결과는 항상 입력 인덱스 순서로 돌려주므로 스케줄링이 결과에 영향을 주지 않는다.
    멤버가 실패하면 나머지 작업을 멈추고 EnsembleMemberError 로 다시 던진다.
    """

    def __init__(self, jobs: int = 1, name: str = "ensemble"):
        self.jobs = max(1, int(jobs))
        self.name = name
        self.running = False
        self.workers: List[threading.Thread] = []
        self._lock = threading.Lock()
        self._tasks: "queue.Queue[Tuple[int, Any]]" = queue.Queue()
        self._results: dict = {}
        self._failure: Optional[Tuple[int, BaseException]] = None

    def map(self, fn: Callable[[Any], Any], items: Iterable[Any]) -> List[Any]:
        items = list(items)
        if not items:
            return []

        # 단일 워커면 현재 스레드에서 순서대로 실행
        if self.jobs == 1 or len(items) == 1:
            results = []
            for index, item in enumerate(items):
                try:
                    results.append(fn(item))
                except Exception as e:
                    logger.error(f"{self.name}: member {index} failed - error={e}", exc_info=True)
                    raise EnsembleMemberError(f"{self.name} member {index} failed: {e}") from e
            return results

        self._results = {}
        self._failure = None
        for index, item in enumerate(items):
            self._tasks.put((index, item))

        self.running = True
        worker_count = min(self.jobs, len(items))
        self.workers = []
        for worker_id in range(worker_count):
            worker = threading.Thread(
                target=self._worker,
                args=(worker_id, fn),
                name=f"{self.name}-worker-{worker_id}",
                daemon=True,
            )
            worker.start()
            self.workers.append(worker)
        logger.info(f"{self.name}: {worker_count} workers started for {len(items)} members")

        for worker in self.workers:
            worker.join()
        self.running = False

        if self._failure is not None:
            index, error = self._failure
            raise EnsembleMemberError(f"{self.name} member {index} failed: {error}") from error
        return [self._results[index] for index in range(len(items))]

    def _worker(self, worker_id: int, fn: Callable[[Any], Any]):
        """Worker 스레드 메인 루프"""
        while self.running:
            try:
                index, item = self._tasks.get_nowait()
            except queue.Empty:
                return
            try:
                result = fn(item)
                with self._lock:
                    self._results[index] = result
                logger.debug(f"Worker {worker_id}: member {index} done")
            except Exception as e:
                logger.error(f"Worker {worker_id}: member {index} failed - error={e}", exc_info=True)
                with self._lock:
                    if self._failure is None:
                        self._failure = (index, e)
                self.stop()
            finally:
                self._tasks.task_done()

    def stop(self):
        """남은 작업 취소"""
        self.running = False
        while True:
            try:
                self._tasks.get_nowait()
                self._tasks.task_done()
            except queue.Empty:
                break
