"""
Request Decorators for the Simulation Report Service
"""

import logging
from datetime import datetime
from functools import wraps

from flask import jsonify, request

from config import SETTING_KEYS

logger = logging.getLogger(__name__)


def log_api_access(f):
    """
    Decorator to log API access
    Usage: @log_api_access
    """
    @wraps(f)
    def decorated_function(*args, **kwargs):
        log_data = {
            'timestamp': datetime.utcnow().isoformat(),
            'method': request.method,
            'endpoint': request.endpoint,
            'path': request.path,
            'remote_addr': request.remote_addr,
            'content_length': request.content_length
        }

        logger.info(f"API Access: {log_data}")

        return f(*args, **kwargs)
    return decorated_function


def validate_json(required_fields=None, optional_fields=None):
    """
    Decorator to validate JSON request body
    Usage: @validate_json(['protocol'], ['rounds', 'seed'])
    """
    def decorator(f):
        @wraps(f)
        def decorated_function(*args, **kwargs):
            if not request.is_json:
                return jsonify({"error": "JSON content type required"}), 400

            data = request.get_json(silent=True)
            if not isinstance(data, dict):
                return jsonify({"error": "Request body must be a JSON object"}), 400

            if required_fields:
                missing_fields = [
                    field for field in required_fields
                    if field not in data or data[field] is None or str(data[field]).strip() == ''
                ]
                if missing_fields:
                    return jsonify({
                        "error": "Missing required fields: " + ", ".join(missing_fields),
                        "missing_fields": missing_fields
                    }), 400

            if optional_fields is not None:
                allowed = set(required_fields or []) | set(optional_fields)
                unknown_fields = sorted(
                    field for field in data if field.replace('-', '_').lower() not in allowed
                )
                if unknown_fields:
                    return jsonify({
                        "error": "Unknown fields: " + ", ".join(unknown_fields),
                        "unknown_fields": unknown_fields
                    }), 400

            return f(*args, **kwargs)
        return decorated_function
    return decorator


CAMPAIGN_FIELDS = [key for key in SETTING_KEYS if key not in ('protocol', 'format')]
