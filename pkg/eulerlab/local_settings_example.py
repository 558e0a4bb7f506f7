'''This is an example Python script for local_settings.py.'''

import os
from dotenv import load_dotenv
load_dotenv()

SECRET_KEY = os.getenv('SECRET_KEY')
DEBUG = True

# verbose numerics while debugging a spec
EULER_LOG_LEVEL = 'DEBUG'
EULER_PROGRESS = True

# larger batches on machines with plenty of memory
EULER_BATCH_SIZE = 262144

# keep solved critical point sets around for a week
EULER_CRITICAL_CACHE_TIMEOUT = 7 * 24 * 3600
