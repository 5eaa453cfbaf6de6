# -*- coding: utf-8 -*-
'''Shared functionality for reading fields of structured scene documents.'''

import math

from QuasiChord import errors


class DocumentDataFormat(object):
    '''Key-value document format.

    Readers take the enclosing object, the key and the path of the object,
    and raise SceneFormatError naming the full field path.
    '''

    def _FieldPath(self, path, key):
        if isinstance(key, int):
            return '{0:s}[{1:d}]'.format(path, key)
        if not path:
            return key
        return '{0:s}.{1:s}'.format(path, key)

    def _HasField(self, document, key):
        if isinstance(document, list):
            return isinstance(key, int) and 0 <= key < len(document)
        return key in document

    def _Fail(self, field, message):
        raise errors.SceneFormatError(
            '{0:s}: {1:s}'.format(field, message), field=field)

    def _ReadObject(self, document, key, path, required=True):
        '''Returns a nested object, None when optional and absent.'''
        field = self._FieldPath(path, key)
        if not isinstance(document, dict):
            self._Fail(path or 'document', 'expected an object')
        if key not in document:
            if required:
                self._Fail(field, 'missing field')
            return None
        value = document[key]
        if not isinstance(value, dict):
            self._Fail(field, 'expected an object')
        return value

    def _ReadList(self, document, key, path, minimum_length=0):
        field = self._FieldPath(path, key)
        if key not in document:
            self._Fail(field, 'missing field')
        value = document[key]
        if not isinstance(value, list):
            self._Fail(field, 'expected a list')
        if len(value) < minimum_length:
            self._Fail(field, 'expected at least {0:d} entries'.format(minimum_length))
        return value

    def _ReadString(self, document, key, path, default=None):
        field = self._FieldPath(path, key)
        if key not in document:
            if default is None:
                self._Fail(field, 'missing field')
            return default
        value = document[key]
        if not isinstance(value, str):
            self._Fail(field, 'expected a string')
        return value

    def _ReadNumber(self, document, key, path, default=None, positive=False):
        '''Returns a finite number field as float.

        Args:
          document (dict): enclosing object.
          key (str): field name.
          path (str): path of the enclosing object.
          default (Optional[float]): value of an absent field, required when
              None.
          positive (Optional[bool]): True to require a value > 0.
        '''
        field = self._FieldPath(path, key)
        if not self._HasField(document, key):
            if default is None:
                self._Fail(field, 'missing field')
            return float(default)
        value = document[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self._Fail(field, 'expected a number')
        if not math.isfinite(value):
            self._Fail(field, 'expected a finite number')
        if positive and value <= 0:
            self._Fail(field, 'expected a positive number')
        return float(value)

    def _ReadVector(self, document, key, path, default=None):
        '''Returns a 3-vector field as a list of floats.'''
        field = self._FieldPath(path, key)
        if key not in document:
            if default is None:
                self._Fail(field, 'missing field')
            return list(default)
        value = document[key]
        if not isinstance(value, list) or len(value) != 3:
            self._Fail(field, 'expected a list of 3 numbers')
        return [self._ReadNumber(value, index, field) for index in range(3)]
