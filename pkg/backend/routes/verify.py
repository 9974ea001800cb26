from datetime import datetime

from flask import Blueprint, jsonify

from utils.middleware import log_api_access
from utils.verification import run_verification

verify_bp = Blueprint("verify", __name__)


@verify_bp.route("/", methods=["GET"], strict_slashes=False)
@log_api_access
def verify():
    """Run every verification suite"""
    try:
        results = run_verification()
        passed = all(result.passed for result in results)
        return jsonify({
            "passed": passed,
            "suites": [result.to_dict() for result in results],
            "generated_at": datetime.utcnow().isoformat()
        }), 200 if passed else 500
    except Exception as e:
        return jsonify({"error": f"Failed to run verification: {str(e)}"}), 500
