from datetime import datetime

from flask import Blueprint, current_app, jsonify

from config import default_settings
from utils.middleware import log_api_access

settings_bp = Blueprint("settings", __name__)


@settings_bp.route("/", methods=["GET"], strict_slashes=False)
@log_api_access
def get_settings():
    """Get the effective campaign defaults"""
    try:
        return jsonify({
            "settings": default_settings(),
            "max_api_rounds": current_app.config["MAX_API_ROUNDS"],
            "last_updated": datetime.utcnow().isoformat()
        })
    except Exception as e:
        return jsonify({"error": f"Failed to get settings: {str(e)}"}), 500
