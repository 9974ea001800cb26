from flask import Blueprint, Response, jsonify, request

from utils.errors import InvalidArgumentError
from utils.middleware import log_api_access
from utils.reports import ReportGenerator

tables_bp = Blueprint("tables", __name__)


@tables_bp.route("/<which>", methods=["GET"])
@log_api_access
def get_table(which):
    """Regenerate correspondence table I, II or III"""
    format_type = request.args.get("format", "json").lower()
    try:
        if format_type == "csv":
            frame = ReportGenerator.table_frame(which)
            return Response(ReportGenerator.render_table(frame, "csv"), mimetype="text/csv")
        if format_type != "json":
            return jsonify({"error": f"Unsupported format: {format_type}"}), 400
        return jsonify(ReportGenerator.generate_table_report(which))
    except InvalidArgumentError as e:
        return jsonify({"error": str(e)}), 400
    except Exception as e:
        return jsonify({"error": f"Failed to build table: {str(e)}"}), 500
