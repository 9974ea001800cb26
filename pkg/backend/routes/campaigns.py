from flask import Blueprint, current_app, jsonify, request

from models import ProtocolConfig
from utils.campaign import run_campaign
from utils.errors import InvalidArgumentError
from utils.middleware import CAMPAIGN_FIELDS, log_api_access, validate_json

campaigns_bp = Blueprint("campaigns", __name__)


@campaigns_bp.route("/", methods=["POST"], strict_slashes=False)
@log_api_access
@validate_json(["protocol"], CAMPAIGN_FIELDS)
def create_campaign():
    """Run a campaign synchronously and return its report"""
    data = request.get_json()
    try:
        config = ProtocolConfig.from_settings(
            {key.replace("-", "_").lower(): value for key, value in data.items()}
        )
        max_rounds = current_app.config["MAX_API_ROUNDS"]
        if config.rounds > max_rounds:
            return jsonify({
                "error": f"rounds must not exceed {max_rounds} over the API",
                "max_rounds": max_rounds
            }), 400

        report, _ = run_campaign(config)
        return jsonify(report.to_dict()), 201
    except InvalidArgumentError as e:
        return jsonify({"error": str(e)}), 400
    except Exception as e:
        return jsonify({"error": f"Failed to run campaign: {str(e)}"}), 500
