# -*- coding: utf-8 -*-
'''The scene file parser and emitter.

A scene is a JSON document:

  {"name": "two-lobe",
   "kernel": {"type": "exponential", "sigma": 1.0},
   "bodies": [{"label": "lobe1", "shape": {"type": "sphere", ...}}, ...]}
'''

import hashlib
import json
import os

from QuasiChord import data_format
from QuasiChord import errors
from QuasiChord import geometry
from QuasiChord import kernels
from QuasiChord import logger
from QuasiChord import multibody


class SceneFile(data_format.DocumentDataFormat):
    '''Scene file parser.

    Attributes:
      name (str): scene name.
      kernel (Kernel): point kernel.
      zone_set (ZoneSet): labeled bodies.
      digest (str): SHA-256 hex digest of the scene file contents.
    '''

    SHAPE_TYPES = (
        'sphere', 'box', 'cylinder', 'union', 'intersection', 'difference',
        'transform')

    KERNEL_TYPES = ('exponential', 'constant', 'buildup', 'table')

    def __init__(self, path, probe=True):
        '''Initializes a scene file parser.

        Args:
          path (str): path of the scene file; kernel tables are resolved
              relative to its directory.
          probe (Optional[bool]): True to probe the zones for overlap.
        '''
        super(SceneFile, self).__init__()
        self._path = path
        self._probe = probe
        self.name = ''
        self.kernel = None
        self.zone_set = None
        self.digest = ''

    def _ReadShape(self, shape, path, label=''):
        shape_type = self._ReadString(shape, 'type', path)
        if shape_type not in self.SHAPE_TYPES:
            self._Fail(path + '.type', 'unknown shape type {0:s}'.format(shape_type))
        try:
            if shape_type == 'sphere':
                return geometry.Sphere(
                    self._ReadVector(shape, 'center', path),
                    self._ReadNumber(shape, 'radius', path, positive=True), label=label)
            if shape_type == 'box':
                return geometry.Box(
                    self._ReadVector(shape, 'lo', path),
                    self._ReadVector(shape, 'hi', path), label=label)
            if shape_type == 'cylinder':
                return geometry.Cylinder(
                    self._ReadVector(shape, 'start', path),
                    self._ReadVector(shape, 'end', path),
                    self._ReadNumber(shape, 'radius', path, positive=True), label=label)
            if shape_type == 'transform':
                body = self._ReadShape(
                    self._ReadObject(shape, 'body', path), path + '.body')
                rotate = self._ReadObject(shape, 'rotate', path, required=False) or {}
                return geometry.TransformedBody(
                    body, translate=self._ReadVector(
                        shape, 'translate', path, default=(0.0, 0.0, 0.0)),
                    axis=self._ReadVector(
                        rotate, 'axis', path + '.rotate', default=(0.0, 0.0, 1.0)),
                    angle_degrees=self._ReadNumber(
                        rotate, 'angle_degrees', path + '.rotate', default=0.0),
                    label=label)

            left = self._ReadShape(self._ReadObject(shape, 'left', path), path + '.left')
            right = self._ReadShape(
                self._ReadObject(shape, 'right', path), path + '.right')
            if shape_type == 'union':
                return geometry.Union(left, right, label=label)
            if shape_type == 'intersection':
                return geometry.Intersection(left, right, label=label)
            return geometry.Difference(left, right, label=label)

        except (errors.GeometryError, ValueError) as exception:
            self._Fail(path, str(exception))

    def _ReadKernel(self, kernel, path):
        kernel_type = self._ReadString(kernel, 'type', path)
        if kernel_type not in self.KERNEL_TYPES:
            self._Fail(path + '.type', 'unknown kernel type {0:s}'.format(kernel_type))
        try:
            if kernel_type == 'exponential':
                return kernels.ExponentialKernel(
                    self._ReadNumber(kernel, 'sigma', path, positive=True))
            if kernel_type == 'constant':
                return kernels.ConstantKernel(
                    self._ReadNumber(kernel, 'value', path, default=1.0))
            if kernel_type == 'buildup':
                coefficients = self._ReadList(kernel, 'coefficients', path, minimum_length=1)
                return kernels.BuildUpKernel(
                    self._ReadNumber(kernel, 'sigma', path, positive=True),
                    [self._ReadNumber(coefficients, index, path + '.coefficients')
                     for index in range(len(coefficients))])

            table_path = self._ReadString(kernel, 'path', path)
            resolved_path = table_path
            if not os.path.isabs(table_path):
                resolved_path = os.path.join(os.path.dirname(self._path), table_path)
            table_kernel = kernels.ReadKernelTable(resolved_path)
            table_kernel.path = table_path
            return table_kernel

        except (IOError, OSError, ValueError) as exception:
            self._Fail(path, str(exception))

    def _ParseFileObject(self, file_object):
        '''Parses a scene file-like object.

        Args:
          file_object (file): file-like object opened in binary mode.

        Returns:
          bool: True if the scene was successfully parsed.

        Raises:
          SceneFormatError: if the document is not valid JSON or violates
              the scene schema.
        '''
        data = file_object.read()
        self.digest = hashlib.sha256(data).hexdigest()
        try:
            document = json.loads(data.decode('utf-8'))
        except UnicodeDecodeError as exception:
            raise errors.SceneFormatError('Scene is not UTF-8: {0!s}'.format(exception))
        except ValueError as exception:
            line = getattr(exception, 'lineno', None)
            raise errors.SceneFormatError(
                'Invalid JSON at line {0!s} column {1!s}: {2:s}'.format(
                    line, getattr(exception, 'colno', None),
                    getattr(exception, 'msg', str(exception))), line=line)
        self.ParseDocument(document)
        return True

    def ParseDocument(self, document):
        '''Reads the scene from a decoded document.

        Raises:
          SceneFormatError: if the document violates the scene schema.
        '''
        if not isinstance(document, dict):
            self._Fail('document', 'expected an object')
        self.name = self._ReadString(document, 'name', '', default='')
        self.kernel = self._ReadKernel(self._ReadObject(document, 'kernel', ''), 'kernel')
        bodies = []
        entries = self._ReadList(document, 'bodies', '', minimum_length=1)
        for index, entry in enumerate(entries):
            path = 'bodies[{0:d}]'.format(index)
            if not isinstance(entry, dict):
                self._Fail(path, 'expected an object')
            label = self._ReadString(entry, 'label', path)
            bodies.append(self._ReadShape(
                self._ReadObject(entry, 'shape', path), path + '.shape', label=label))
        self.zone_set = multibody.ZoneSet(bodies, probe=self._probe)
        logger.debug('Scene {0:s}: {1:d} zones, kernel {2:s}'.format(
            self.name or self._path, len(bodies), self.kernel.NAME))

    def Parse(self):
        '''Parses the scene file.

        Returns:
          bool: True if successful or False if the file cannot be read.

        Raises:
          SceneFormatError: if the document violates the scene schema.
        '''
        try:
            with open(self._path, 'rb') as file_object:
                return self._ParseFileObject(file_object)
        except (IOError, OSError) as exception:
            logger.error('Failed to read scene {0:s}: {1!s}'.format(
                self._path, exception))
        return False


def EmitScene(zone_set, kernel, name=''):
    '''Returns the scene document of a zone set and kernel.'''
    return {
        'name': name,
        'kernel': kernel.ToDict(),
        'bodies': [
            {'label': body.label, 'shape': body.ToDict()} for body in zone_set.bodies]}


def WriteScene(path, zone_set, kernel, name=''):
    '''Writes a scene document to a file.'''
    with open(path, 'w') as file_object:
        json.dump(EmitScene(zone_set, kernel, name), file_object, indent=2, sort_keys=True)
