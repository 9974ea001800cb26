import logging

from flask import Flask
from flask_cors import CORS

from config import Config


def create_app(config_object=Config):
    app = Flask(__name__)
    app.config.from_object(config_object)

    logging.basicConfig(level=app.config["LOG_LEVEL"], format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    CORS(app)

    from routes.tables import tables_bp
    from routes.campaigns import campaigns_bp
    from routes.verify import verify_bp
    from routes.settings import settings_bp

    app.register_blueprint(tables_bp, url_prefix="/api/tables")
    app.register_blueprint(campaigns_bp, url_prefix="/api/campaigns")
    app.register_blueprint(verify_bp, url_prefix="/api/verify")
    app.register_blueprint(settings_bp, url_prefix="/api/settings")

    return app

if __name__ == "__main__":
    app = create_app()
    app.run(debug=True)
