"""Append-only JSONL record of analyzer runs."""

import hashlib
import json
import logging
from datetime import datetime
from typing import Optional

logger = logging.getLogger(__name__)

DEFAULT_AUDIT_LOG_FILE = "stablegraph_audit.log"


class AuditLogger:
    def __init__(self, log_file: Optional[str] = None, enabled: bool = False):
        self.log_file = log_file or DEFAULT_AUDIT_LOG_FILE
        self.enabled = enabled

    def log_run(self, command: str, program_text: str, result: str,
                error: Optional[str] = None):
        if not self.enabled:
            return

        log_entry = {
            'timestamp': datetime.now().isoformat(),
            'command': command,
            'input_hash': hashlib.sha256(program_text.encode()).hexdigest()[:16],
            'input_size': len(program_text),
            'result': result[:200],  # Truncate long results
            'error': error,
        }

        try:
            with open(self.log_file, 'a', encoding='utf-8') as f:
                f.write(json.dumps(log_entry) + '\n')
        except OSError as e:
            logger.error(f"Failed to write audit log: {e}")
